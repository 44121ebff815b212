//! JSON problem files.

use serde::{Deserialize, Serialize};
use twospin::{FieldSpec, Interp, Problem, RabiParams, SampledProfile, ScalarProfile};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "G")]
    pub g: FieldDto,
    #[serde(rename = "F")]
    pub f: FieldDto,
    #[serde(rename = "J")]
    pub j: ProfileDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldDto {
    Zero,
    Constant {
        vector: [f64; 3],
    },
    Rabi {
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "A0")]
        a0: f64,
        omega: f64,
        #[serde(default)]
        phi: f64,
    },
    ParallelZ {
        profile: ProfileDto,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileDto {
    Constant {
        value: f64,
    },
    Samples {
        knots: Vec<[f64; 2]>,
        #[serde(default)]
        interp: InterpDto,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpDto {
    #[default]
    Cubic,
    Linear,
}

fn finite(x: f64, what: &str) -> Result<f64, String> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{what} must be finite"))
    }
}

impl ProfileDto {
    pub fn to_model(&self) -> Result<ScalarProfile<f64>, String> {
        match self {
            ProfileDto::Constant { value } => Ok(ScalarProfile::Constant(finite(*value, "profile value")?)),
            ProfileDto::Samples { knots, interp } => {
                let interp = match interp {
                    InterpDto::Cubic => Interp::MonotoneCubic,
                    InterpDto::Linear => Interp::Linear,
                };
                let knots = knots
                    .iter()
                    .map(|[t, v]| Ok((finite(*t, "knot time")?, finite(*v, "knot value")?)))
                    .collect::<Result<Vec<_>, String>>()?;
                SampledProfile::new(knots, interp).map(ScalarProfile::Samples).map_err(|e| e.to_string())
            }
        }
    }
}

impl FieldDto {
    pub fn to_model(&self) -> Result<FieldSpec<f64>, String> {
        match self {
            FieldDto::Zero => Ok(FieldSpec::Zero),
            FieldDto::Constant { vector } => {
                for x in vector {
                    finite(*x, "field component")?;
                }
                Ok(FieldSpec::Constant(*vector))
            }
            FieldDto::Rabi { a, a0, omega, phi } => {
                finite(*a, "A")?;
                finite(*a0, "A0")?;
                finite(*phi, "phi")?;
                RabiParams::with_phase(*a, *a0, *omega, *phi).map(FieldSpec::Rabi).map_err(|e| e.to_string())
            }
            FieldDto::ParallelZ { profile } => profile.to_model().map(FieldSpec::ParallelZ),
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid problem file: {e}"))
    }

    pub fn to_model(&self) -> Result<Problem, String> {
        let p = Problem::new(self.g.to_model()?, self.f.to_model()?, self.j.to_model()?);
        Ok(match self.t0 {
            Some(t0) => p.with_t0(finite(t0, "t0")?),
            None => p,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "G": {"type": "rabi", "A": 0.25, "A0": 1.0, "omega": 2.0},
        "F": {"type": "parallel_z", "profile": {"type": "samples", "knots": [[0, 1], [1, 2], [3, 0.5]], "interp": "linear"}},
        "J": {"type": "constant", "value": 0.5},
        "t0": 0.25
    }"#;

    #[test]
    fn round_trip() {
        let p = ProblemFile::parse(SAMPLE).unwrap();
        let again = ProblemFile::parse(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(p, again);
        let m = p.to_model().unwrap();
        assert_eq!(m.t0, 0.25);
        assert!(matches!(m.g, FieldSpec::Rabi(rp) if rp.phase == 0.0));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let extra = SAMPLE.replace("\"t0\": 0.25", "\"t0\": 0.25, \"dt\": 1");
        assert!(ProblemFile::parse(&extra).is_err());
        let nested = SAMPLE.replace("\"omega\": 2.0", "\"omega\": 2.0, \"w\": 1");
        assert!(ProblemFile::parse(&nested).is_err());
    }

    #[test]
    fn invalid_values() {
        let zero = SAMPLE.replace("\"omega\": 2.0", "\"omega\": 0.0");
        assert!(ProblemFile::parse(&zero).unwrap().to_model().is_err());
        let unsorted = SAMPLE.replace("[3, 0.5]", "[0.5, 0.5]");
        assert!(ProblemFile::parse(&unsorted).unwrap().to_model().is_err());
    }
}
