//! Batch verification suites over the formlab core, with JSON and CSV reports.

mod gen;
mod report;
mod suites;

use std::time::Instant;

use clap::ValueEnum;
use formlab_core::gf::FieldSpec;
use formlab_core::{Error, Field, FormParameters, Preset};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use report::{CheckRecord, Report, Status, Timing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    FormsAxioms,
    ComplementLemmas,
    BuildingDims,
    CohenMacaulay,
    FiltrationComplex,
    SteinbergCoinvariants,
    Kunneth,
    GroupCensus,
    StabilizerSequences,
    EuclideanHyperbolization,
    StabilitySmoke,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::FormsAxioms,
        Suite::ComplementLemmas,
        Suite::BuildingDims,
        Suite::CohenMacaulay,
        Suite::FiltrationComplex,
        Suite::SteinbergCoinvariants,
        Suite::Kunneth,
        Suite::GroupCensus,
        Suite::StabilizerSequences,
        Suite::EuclideanHyperbolization,
        Suite::StabilitySmoke,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FormsAxioms => "forms-axioms",
            Suite::ComplementLemmas => "complement-lemmas",
            Suite::BuildingDims => "building-dims",
            Suite::CohenMacaulay => "cohen-macaulay",
            Suite::FiltrationComplex => "filtration-complex",
            Suite::SteinbergCoinvariants => "steinberg-coinvariants",
            Suite::Kunneth => "kunneth",
            Suite::GroupCensus => "group-census",
            Suite::StabilizerSequences => "stabilizer-sequences",
            Suite::EuclideanHyperbolization => "euclidean-hyperbolization",
            Suite::StabilitySmoke => "stability-smoke",
        }
    }

    /// (fields, min dim, max dim, max genus, samples) used when the config leaves them open.
    fn defaults(self) -> (&'static [&'static str], usize, usize, usize, usize) {
        match self {
            Suite::FormsAxioms => (&["2", "3", "2^2", "5"], 1, 3, 2, 40),
            Suite::ComplementLemmas => (&["2", "3", "2^2"], 1, 4, 2, 40),
            Suite::BuildingDims => (&["2", "3"], 1, 4, 2, 1),
            Suite::CohenMacaulay => (&["2", "3"], 1, 3, 2, 1),
            Suite::FiltrationComplex => (&["2", "3"], 1, 3, 2, 1),
            Suite::SteinbergCoinvariants => (&["2", "3", "2^2"], 1, 3, 2, 1),
            Suite::Kunneth => (&["2", "3"], 1, 3, 2, 1),
            Suite::GroupCensus => (&["2", "3"], 1, 4, 2, 1),
            Suite::StabilizerSequences => (&["2", "3"], 2, 3, 2, 1),
            Suite::EuclideanHyperbolization => (&["2", "3", "2^2", "5"], 1, 3, 2, 20),
            Suite::StabilitySmoke => (&["2", "3"], 1, 2, 1, 1),
        }
    }
}

/// One run of one suite. `None` fields fall back to the suite defaults.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub fields: Vec<String>,
    /// "symplectic", "unitary", "orthogonal" or "custom:<eps>:<l1>,<l2>,..."; empty means all three classical ones
    pub presets: Vec<String>,
    pub min_dim: Option<usize>,
    pub max_dim: Option<usize>,
    pub max_genus: Option<usize>,
    pub cap: u64,
    pub seed: u64,
    pub samples: Option<usize>,
    pub slow: bool,
}

impl ExperimentConfig {
    pub fn new(suite: Suite) -> Self {
        ExperimentConfig {
            suite,
            fields: vec![],
            presets: vec![],
            min_dim: None,
            max_dim: None,
            max_genus: None,
            cap: 2_000_000,
            seed: 0,
            samples: None,
            slow: false,
        }
    }

    /// Fills every open field from the suite defaults and validates the result.
    pub fn resolve(&self) -> Result<Inputs, Error> {
        let (fields, lo, hi, genus, samples) = self.suite.defaults();
        if self.cap == 0 {
            return Err(Error::Parse("cap must be positive".into()));
        }
        if self.samples == Some(0) {
            return Err(Error::Parse("samples must be positive".into()));
        }
        let fields: Vec<String> =
            if self.fields.is_empty() { fields.iter().map(|s| s.to_string()).collect() } else { self.fields.clone() };
        for lit in &fields {
            Field::parse(lit)?;
        }
        let presets: Vec<String> = if self.presets.is_empty() {
            Preset::ALL.iter().map(|p| p.name().to_string()).collect()
        } else {
            self.presets.clone()
        };
        for p in &presets {
            PresetChoice::parse(p)?;
        }
        let inputs = Inputs {
            suite: self.suite,
            fields,
            presets,
            min_dim: self.min_dim.unwrap_or(lo),
            max_dim: self.max_dim.unwrap_or(hi),
            max_genus: self.max_genus.unwrap_or(genus),
            cap: self.cap,
            seed: self.seed,
            samples: self.samples.unwrap_or(samples),
            slow: self.slow,
        };
        // custom parameters must make sense over every field
        inputs.param_sets()?;
        Ok(inputs)
    }
}

/// The resolved configuration, echoed into the report.
#[derive(Clone, Debug, Serialize)]
pub struct Inputs {
    pub suite: Suite,
    pub fields: Vec<String>,
    pub presets: Vec<String>,
    pub min_dim: usize,
    pub max_dim: usize,
    pub max_genus: usize,
    pub cap: u64,
    pub seed: u64,
    pub samples: usize,
    pub slow: bool,
}

impl Inputs {
    pub fn dims(&self) -> std::ops::RangeInclusive<usize> {
        self.min_dim..=self.max_dim
    }
    pub fn cap(&self) -> u128 {
        self.cap as u128
    }
    pub(crate) fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
    }

    pub fn field_list(&self) -> Result<Vec<Field>, Error> {
        self.fields.iter().map(|s| Field::parse(s)).collect()
    }

    /// Every (field, preset) pair that makes sense, deduplicated.
    /// Unitary needs an involution: an even degree field gets one, otherwise F_q is replaced by F_{q^2}.
    /// Symplectic and orthogonal drop any involution carried by the literal.
    pub fn param_sets(&self) -> Result<Vec<ParamSet>, Error> {
        let mut out: Vec<ParamSet> = Vec::new();
        for choice in self.presets.iter().map(|p| PresetChoice::parse(p)) {
            let choice = choice?;
            for lit in &self.fields {
                let field = Field::parse(lit)?;
                let ps = choice.params(&field)?;
                if !out.iter().any(|o| o.label == ps.label) {
                    out.push(ps);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresetChoice {
    Classical(Preset),
    Custom { epsilon: String, lambda: Vec<String> },
}

impl PresetChoice {
    pub fn parse(s: &str) -> Result<PresetChoice, Error> {
        if let Some(rest) = s.strip_prefix("custom:") {
            let (eps, lam) = rest.split_once(':').unwrap_or((rest, ""));
            let lambda = lam.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect();
            return Ok(PresetChoice::Custom { epsilon: eps.trim().to_string(), lambda });
        }
        Ok(PresetChoice::Classical(Preset::parse(s)?))
    }

    fn params(&self, field: &Field) -> Result<ParamSet, Error> {
        match self {
            PresetChoice::Classical(p) => {
                let f = classical_field(field, *p)?;
                let params = FormParameters::preset(&f, *p)?;
                Ok(ParamSet { label: format!("{} F_{}", p.name(), f.q()), preset: Some(*p), params })
            }
            PresetChoice::Custom { epsilon, lambda } => {
                let eps = field.parse_elem(epsilon)?;
                let lam = lambda.iter().map(|l| field.parse_elem(l)).collect::<Result<Vec<_>, _>>()?;
                let params = FormParameters::new(field, eps, &lam)?;
                let label = format!("custom({epsilon};{}) F_{}", lambda.join(","), field.q());
                Ok(ParamSet { label, preset: None, params })
            }
        }
    }
}

fn classical_field(field: &Field, p: Preset) -> Result<Field, Error> {
    let spec = field.spec();
    match p {
        Preset::Unitary if field.involution_is_trivial() => {
            if spec.r.is_multiple_of(2) {
                Field::new(FieldSpec { s: spec.r / 2, ..spec.clone() })
            } else {
                Field::with_involution(spec.p, 2 * spec.r, spec.r)
            }
        }
        Preset::Unitary => Ok(field.clone()),
        _ if !field.involution_is_trivial() => Field::new(FieldSpec { s: 0, ..spec.clone() }),
        _ => Ok(field.clone()),
    }
}

/// Form parameters with a short label such as "orthogonal F_3".
#[derive(Clone, Debug)]
pub struct ParamSet {
    pub label: String,
    pub preset: Option<Preset>,
    pub params: FormParameters,
}

impl ParamSet {
    pub fn field(&self) -> &Field {
        self.params.field()
    }
    pub fn q(&self) -> u32 {
        self.params.field().q()
    }
}

/// Runs one suite. Errors raised mid-suite end it early; the checks gathered so far are kept.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<Report, Error> {
    let inputs = cfg.resolve()?;
    let start = Instant::now();
    let mut ctx = suites::Ctx::new(&inputs);
    let outcome = if inputs.min_dim > inputs.max_dim { Ok(()) } else { suites::dispatch(&mut ctx) };
    let checks = ctx.into_checks();
    let error = outcome.err().map(|e| e.to_string());
    let passed = error.is_none() && checks.iter().all(|c| c.status != Status::Fail);
    Ok(Report {
        suite: inputs.suite.name().to_string(),
        inputs,
        checks,
        passed,
        error,
        timing: Timing { total_ms: start.elapsed().as_millis() as u64 },
    })
}
