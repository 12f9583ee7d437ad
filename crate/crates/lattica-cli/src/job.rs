//! Config resolution: JSON file values, overridden by flags, validated
//! through the library constructors before any work happens.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use lattica::boundary::{BaseBoundary, BoundarySpec, Corner};
use lattica::grid::LatticeDims;
use lattica::stepper::RuleCoefficients;
use lattica::FieldSpec;

/// A command failure carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// I/O or internal error (exit 1).
    Io(String),
    /// Validation failure (exit 2).
    Usage(String),
    /// Builder mismatch under `matrix --check` (exit 3).
    Mismatch(String),
    /// Irreversible rule under `run --backward` (exit 4).
    Irreversible(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Mismatch(_) => 3,
            Failure::Irreversible(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Usage(m) | Failure::Mismatch(m) | Failure::Irreversible(m) => m,
        }
    }
}

/// Optional values read from a `--config` JSON file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    p: Option<u64>,
    m: Option<usize>,
    n: Option<usize>,
    coeffs: Option<Vec<u64>>,
    spec: Option<String>,
    steps: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

/// A fully validated job.
pub struct Job {
    pub field: FieldSpec,
    pub dims: LatticeDims,
    pub coeffs: RuleCoefficients,
    pub boundary: BoundarySpec,
    pub spec_label: String,
    pub coeff_values: [u64; 8],
    pub steps: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Job {
    /// Merges config file, flags and defaults, then validates everything.
    pub fn resolve(
        common: &crate::CommonArgs,
        steps_flag: Option<usize>,
        seed_flag: Option<u64>,
        out_flag: Option<&Path>,
    ) -> Result<Job, Failure> {
        let file = match &common.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Failure::Usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str::<FileConfig>(&text).map_err(|e| {
                    Failure::Usage(format!("bad config {}: {e}", path.display()))
                })?
            }
            None => FileConfig::default(),
        };
        let p = common.p.or(file.p).unwrap_or(3);
        let m = common.m.or(file.m).unwrap_or(4);
        let n = common.n.or(file.n).unwrap_or(4);
        let coeff_vec = common
            .coeffs
            .clone()
            .or(file.coeffs)
            .unwrap_or_else(|| vec![1; 8]);
        let spec_label = common
            .spec
            .clone()
            .or(file.spec)
            .unwrap_or_else(|| "phi".to_string());
        let steps = steps_flag.or(file.steps).unwrap_or(0);
        let seed = seed_flag.or(file.seed).unwrap_or(0);
        let out = out_flag.map(Path::to_path_buf).or(file.out);

        let field = FieldSpec::new(p).map_err(|e| Failure::Usage(e.to_string()))?;
        let dims = LatticeDims::new(m, n).map_err(|e| Failure::Usage(e.to_string()))?;
        if coeff_vec.len() != 8 {
            return Err(Failure::Usage(format!(
                "--coeffs needs exactly 8 values a,b,c,d,e,f,g,h, got {}",
                coeff_vec.len()
            )));
        }
        for &v in &coeff_vec {
            if v >= p {
                return Err(Failure::Usage(format!(
                    "coefficient {v} out of range for Z_{p}"
                )));
            }
        }
        let mut coeff_values = [0u64; 8];
        coeff_values.copy_from_slice(&coeff_vec);
        let coeffs = RuleCoefficients::new(field, coeff_values);
        let boundary = parse_boundary(&spec_label)?;
        Ok(Job {
            field,
            dims,
            coeffs,
            boundary,
            spec_label,
            coeff_values,
            steps,
            seed,
            out,
        })
    }

    /// The JSON header written next to a CSV matrix export. Key order is
    /// stable; custom specs additionally record their corner resolution.
    pub fn matrix_header(&self) -> String {
        let coeffs = self
            .coeff_values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let mut header = format!(
            "{{\"p\":{},\"m\":{},\"n\":{},\"spec\":\"{}\",\"coeffs\":[{}]",
            self.field.modulus(),
            self.dims.rows(),
            self.dims.cols(),
            self.spec_label,
            coeffs
        );
        if self.boundary.name().is_none() {
            let corner = |c: Corner| side_letter(self.boundary.corner_condition(c));
            header.push_str(&format!(
                ",\"corners\":{{\"nw\":\"{}\",\"ne\":\"{}\",\"sw\":\"{}\",\"se\":\"{}\"}}",
                corner(Corner::NorthWest),
                corner(Corner::NorthEast),
                corner(Corner::SouthWest),
                corner(Corner::SouthEast)
            ));
        }
        header.push_str("}\n");
        header
    }
}

fn side_letter(b: BaseBoundary) -> &'static str {
    match b {
        BaseBoundary::Null => "n",
        BaseBoundary::Periodic => "p",
        BaseBoundary::Adiabatic => "a",
        BaseBoundary::Reflexive => "r",
    }
}

fn parse_side(s: &str) -> Result<BaseBoundary, Failure> {
    match s {
        "n" => Ok(BaseBoundary::Null),
        "p" => Ok(BaseBoundary::Periodic),
        "a" => Ok(BaseBoundary::Adiabatic),
        "r" => Ok(BaseBoundary::Reflexive),
        other => Err(Failure::Usage(format!(
            "unknown side condition `{other}` (expected n, p, a or r)"
        ))),
    }
}

/// Accepts the thirteen named specs, or `custom:<top>,<bottom>,<left>,<right>`.
fn parse_boundary(label: &str) -> Result<BoundarySpec, Failure> {
    if let Some(rest) = label.strip_prefix("custom:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 4 {
            return Err(Failure::Usage(
                "custom spec needs four side letters: custom:<top>,<bottom>,<left>,<right>"
                    .to_string(),
            ));
        }
        return Ok(BoundarySpec::custom(
            parse_side(parts[0])?,
            parse_side(parts[1])?,
            parse_side(parts[2])?,
            parse_side(parts[3])?,
        ));
    }
    BoundarySpec::from_name(label).map_err(|e| Failure::Usage(e.to_string()))
}
