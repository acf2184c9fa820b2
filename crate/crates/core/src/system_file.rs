//! The JSON system description: the SFT `X`, the one-block code, and
//! optionally a potential, an image point and Markov data.
//!
//! ```json
//! {
//!   "alphabet_x": ["1", "2"],
//!   "edges_x": [["1", "1"], ["1", "2"], ["2", "1"]],
//!   "code": {"1": "a", "2": "b"},
//!   "potential": {"window_radius": 0, "table": {"1": 0.0, "2": 0.5}, "normalize": true},
//!   "point": {"left_tail": "b", "center": "a b", "right_tail": "a", "anchor": 0},
//!   "markov": {"seed": 7}
//! }
//! ```

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::LocallyConstantPotential;
use crate::symbolic::{Alphabet, EventuallyPeriodicPoint, FactorCode, Sft, Sym};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub alphabet_x: Vec<String>,
    pub edges_x: Vec<(String, String)>,
    pub code: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<PointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub markov: Option<MarkovSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub window_radius: usize,
    /// Values keyed by X-words of length `2 * window_radius + 1`.
    pub table: BTreeMap<String, f64>,
    /// Shift the table so that its minimum is zero.
    #[serde(default = "default_true")]
    pub normalize: bool,
    /// Value for allowed windows missing from `table`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<f64>,
}

fn default_true() -> bool {
    true
}

/// An eventually periodic point of the image, as image words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub left_tail: String,
    #[serde(default)]
    pub center: String,
    pub right_tail: String,
    #[serde(default)]
    pub anchor: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovSpec {
    /// Row-stochastic matrix with rows and columns in `alphabet_x` order;
    /// uniform over allowed successors when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub seed: u64,
}

/// A parsed and validated system.
#[derive(Debug, Clone)]
pub struct System {
    pub spec: SystemSpec,
    pub code: FactorCode,
    /// The potential as declared (before normalization).
    pub raw_potential: LocallyConstantPotential,
    /// The potential used in computations (normalized when requested).
    pub potential: LocallyConstantPotential,
    pub point: Option<EventuallyPeriodicPoint>,
}

impl System {
    pub fn sft(&self) -> &Sft {
        self.code.domain()
    }

    /// Markov matrix restricted to the trimmed alphabet, if one was given.
    pub fn markov_matrix(&self) -> Result<Option<Vec<Vec<f64>>>> {
        let Some(m) = self.spec.markov.as_ref().and_then(|m| m.matrix.as_ref()) else {
            return Ok(None);
        };
        let declared = &self.spec.alphabet_x;
        if m.len() != declared.len() || m.iter().any(|r| r.len() != declared.len()) {
            return Err(Error::InvalidMarkov(format!(
                "matrix must be {0} x {0} in alphabet_x order",
                declared.len()
            )));
        }
        let alpha = self.sft().alphabet();
        let keep: Vec<usize> = alpha
            .names()
            .iter()
            .map(|n| declared.iter().position(|d| d == n).unwrap())
            .collect();
        for &i in &keep {
            for (j, name) in declared.iter().enumerate() {
                if m[i][j] != 0.0 && !keep.contains(&j) {
                    return Err(Error::InvalidMarkov(format!(
                        "row `{}` puts mass on trimmed symbol `{name}`",
                        declared[i]
                    )));
                }
            }
        }
        Ok(Some(keep.iter().map(|&i| keep.iter().map(|&j| m[i][j]).collect()).collect()))
    }

    pub fn markov_seed(&self) -> Option<u64> {
        self.spec.markov.as_ref().map(|m| m.seed)
    }
}

pub fn parse_system(text: &str) -> Result<System> {
    let spec: SystemSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    build_system(spec)
}

pub fn load_system(path: impl AsRef<Path>) -> Result<System> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_system(&text)
}

pub fn build_system(spec: SystemSpec) -> Result<System> {
    let edges: Vec<(&str, &str)> = spec.edges_x.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let names: Vec<&str> = spec.alphabet_x.iter().map(String::as_str).collect();
    let sft = Sft::new(&names, &edges)?;
    let map: HashMap<String, String> = spec.code.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    let code = FactorCode::new(sft, &map, &spec.alphabet_x)?;
    let sft = code.domain();

    let (raw_potential, potential) = match &spec.potential {
        None => {
            let z = LocallyConstantPotential::zero(sft);
            (z.clone(), z)
        }
        Some(p) => {
            let declared = Alphabet::new(spec.alphabet_x.iter().cloned())?;
            let width = 2 * p.window_radius + 1;
            let mut entries = Vec::new();
            for (key, &value) in &p.table {
                let names: Vec<&str> = declared.parse_word(key)?.iter().map(|&s| declared.name(s)).collect();
                if names.iter().any(|n| sft.trimmed_symbols().iter().any(|t| t == n)) {
                    continue;
                }
                let w: Vec<Sym> = names.iter().map(|n| sft.alphabet().index_of(n)).collect::<Result<_>>()?;
                if w.len() != width || !sft.is_allowed_word(&w) {
                    return Err(Error::ExtraWindow(key.clone()));
                }
                entries.push((w, value));
            }
            if let Some(d) = p.default {
                let present: std::collections::HashSet<Vec<Sym>> = entries.iter().map(|(w, _)| w.clone()).collect();
                for w in sft.blocks(2 * p.window_radius + 1, crate::symbolic::DEFAULT_ENUMERATION_CAP)? {
                    if !present.contains(w.symbols()) {
                        entries.push((w.into_symbols(), d));
                    }
                }
            }
            let raw = LocallyConstantPotential::from_radius_table(sft, p.window_radius, entries)?;
            let used = if p.normalize { raw.normalize_nonneg() } else { raw.clone() };
            (raw, used)
        }
    };

    let point = match &spec.point {
        None => None,
        Some(p) => {
            let ya = code.image_alphabet();
            let y = EventuallyPeriodicPoint::new(
                ya.parse_word(&p.left_tail)?,
                ya.parse_word(&p.center)?,
                ya.parse_word(&p.right_tail)?,
                p.anchor,
            )?;
            code.check_point(&y)?;
            Some(y)
        }
    };

    Ok(System {
        spec,
        code,
        raw_potential,
        potential,
        point,
    })
}

/// A system description for a code and a potential depending on `[-m, m]`
/// (windows narrower than that are widened).
pub fn spec_from_parts(code: &FactorCode, pot: &LocallyConstantPotential) -> SystemSpec {
    let sft = code.domain();
    let alpha = sft.alphabet();
    let (lo, hi) = pot.window();
    let m = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
    let mut table = BTreeMap::new();
    if let Ok(blocks) = sft.blocks(2 * m + 1, crate::symbolic::DEFAULT_ENUMERATION_CAP) {
        for w in blocks {
            let start = (m as i64 + lo) as usize;
            let end = (m as i64 + hi) as usize;
            let v = pot.value(&w[start..=end]).unwrap_or(0.0);
            table.insert(alpha.render(&w), v);
        }
    }
    SystemSpec {
        alphabet_x: alpha.names().to_vec(),
        edges_x: sft
            .edges()
            .map(|(a, b)| (alpha.name(a).to_string(), alpha.name(b).to_string()))
            .collect(),
        code: alpha
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), code.image_alphabet().name(code.apply(i as u32)).to_string()))
            .collect(),
        potential: if pot.is_zero() {
            None
        } else {
            Some(PotentialSpec {
                window_radius: m,
                table,
                normalize: false,
                default: None,
            })
        },
        point: None,
        markov: None,
    }
}

impl SystemSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
