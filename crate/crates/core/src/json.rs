//! Shared JSON schema: quaternions as 4-arrays [w, x, y, z], quaternionic
//! matrices as row-major nested arrays of 4-arrays, StandardData as
//! {"n", "k", "L", "M"} and ADHMPair as {"n", "k", "a", "b"}.

use crate::adhm::{ADHMPair, StandardData};
use crate::qmat::QuatMatrix;
use crate::quat::Quaternion;
use crate::scalar::Real;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

impl<T: Real + Serialize> Serialize for Quaternion<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.w, self.x, self.y, self.z].serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Quaternion<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<T>::deserialize(d)?;
        if v.len() != 4 {
            return Err(D::Error::custom(format!(
                "quaternion needs 4 components, got {}",
                v.len()
            )));
        }
        Ok(Quaternion::new(v[0], v[1], v[2], v[3]))
    }
}

impl<T: Real + Serialize> Serialize for QuatMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Quaternion<T>>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for QuatMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Quaternion<T>>>::deserialize(d)?;
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        Ok(QuatMatrix::from_rows(rows))
    }
}

#[derive(Serialize, Deserialize)]
struct StandardDataRepr {
    n: usize,
    k: usize,
    #[serde(rename = "L")]
    l: QuatMatrix<f64>,
    #[serde(rename = "M")]
    m: QuatMatrix<f64>,
}

impl Serialize for StandardData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StandardDataRepr {
            n: self.n,
            k: self.k,
            l: self.l.clone(),
            m: self.m.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StandardData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = StandardDataRepr::deserialize(d)?;
        if repr.l.rows != repr.n || repr.l.cols != repr.k || repr.m.rows != repr.k {
            return Err(D::Error::custom("L/M shapes disagree with (n, k)"));
        }
        StandardData::new(repr.l, repr.m).map_err(D::Error::custom)
    }
}

impl Serialize for crate::reps::Representation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use crate::reps::{Algebra, GenSet, RepField};
        #[derive(Serialize)]
        struct Repr {
            algebra: &'static str,
            field: &'static str,
            dim: usize,
            generators: Vec<QuatMatrix<f64>>,
        }
        let algebra = match self.algebra {
            Algebra::Sp1 => "sp1",
            Algebra::Sp1Sp1 => "sp1_plus_sp1",
        };
        let field = match self.field {
            RepField::Real => "real",
            RepField::Complex => "complex",
            RepField::Quaternionic => "quaternionic",
        };
        // Everything embeds into the shared quaternionic matrix schema.
        let generators: Vec<QuatMatrix<f64>> = match &self.gens {
            GenSet::Real(g) => g.iter().map(QuatMatrix::from_real).collect(),
            GenSet::Complex(g) => g
                .iter()
                .map(|m| {
                    QuatMatrix::from_fn(m.rows, m.cols, |i, j| {
                        Quaternion::new(m[(i, j)].re, m[(i, j)].im, 0.0, 0.0)
                    })
                })
                .collect(),
            GenSet::Quaternionic(g) => g.clone(),
        };
        Repr {
            algebra,
            field,
            dim: self.dim,
            generators,
        }
        .serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    n: usize,
    k: usize,
    a: QuatMatrix<f64>,
    b: QuatMatrix<f64>,
}

impl Serialize for ADHMPair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PairRepr {
            n: self.n,
            k: self.k,
            a: self.a.clone(),
            b: self.b.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ADHMPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PairRepr::deserialize(d)?;
        if repr.a.rows != repr.n + repr.k
            || repr.a.cols != repr.k
            || repr.b.rows != repr.a.rows
            || repr.b.cols != repr.k
        {
            return Err(D::Error::custom("a/b shapes disagree with (n, k)"));
        }
        Ok(ADHMPair {
            n: repr.n,
            k: repr.k,
            a: repr.a,
            b: repr.b,
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::adhm::StandardData;
    use crate::{QMat, Quat};

    #[test]
    fn standard_data_roundtrip_bit_identical() {
        let l = QMat::from_fn(1, 2, |_, j| {
            Quat::new(0.1 + j as f64, -0.25, 1.0 / 3.0, 0.7)
        });
        let m = {
            let raw = QMat::from_fn(2, 2, |i, j| Quat::new((i * j) as f64, 0.5, -0.125, 0.0));
            &raw + &raw.transpose()
        };
        let data = StandardData::new(l, m).unwrap();
        let text = serde_json::to_string(&data).unwrap();
        let back: StandardData = serde_json::from_str(&text).unwrap();
        assert_eq!(data.l.data, back.l.data);
        assert_eq!(data.m.data, back.m.data);
        // A second trip is byte-identical.
        assert_eq!(text, serde_json::to_string(&back).unwrap());
    }
}
