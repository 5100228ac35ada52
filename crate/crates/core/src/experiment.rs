//! Experiment configurations, dispatch, and versioned JSON/CSV reports.

use std::path::PathBuf;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::axioms::check_norm_axioms;
use crate::calculus::{derived_distance_bound, lift_idempotent, SeriesVariant};
use crate::certificate::{CertEntry, Certificate};
use crate::colimit::{injectivity_experiment, k0_colimit_compare};
use crate::deloop::{finite_collapse_certificate, swindle_conjugator};
use crate::error::{Error, Result};
use crate::homotopy::{
    constant_path, homotopy_invariance_experiment, jump_path, path_instance, path_trivialize,
    rotation_path,
};
use crate::instances::random::{random_scalar_almost_idempotent, trial_rng};
use crate::instances::{
    make_cantor_tower, make_uhf_tower, random_almost_idempotent, ComplexScalars, ConstantTower,
    Descriptor, MatrixAlgebra, SampledFunctionAlgebra, Tower, TowerDescriptor,
};
use crate::integers::{format_rational, parse_rational, tensor_norm_int};
use crate::k0::{Classify, K0Presentation};
use crate::par::Execution;
use crate::ring::{BanachRing, NormedGroup, RealAlgebra, Sample};

pub const SCHEMA: u32 = 1;

fn default_tol() -> f64 {
    1e-9
}

fn default_trials() -> usize {
    1
}

fn complex() -> Descriptor {
    Descriptor::Complex
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    #[default]
    Sur,
    Inj,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathKind {
    #[default]
    Rotation,
    Constant,
    Jump,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    Lift {
        #[serde(default = "complex")]
        instance: Descriptor,
        /// Lift this element; otherwise lift random almost-idempotents.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        element: Option<Value>,
        #[serde(default = "Command::default_defect")]
        defect: f64,
        #[serde(default = "Command::default_variant")]
        variant: SeriesVariant,
    },
    Transfer {
        tower: TowerDescriptor,
        #[serde(default)]
        direction: Direction,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eps: Option<f64>,
    },
    K0 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        instance: Option<Descriptor>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tower: Option<TowerDescriptor>,
        /// An idempotent of `instance` to classify.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        element: Option<Value>,
    },
    PathTrivialize {
        #[serde(default = "Command::default_path_n")]
        n: usize,
        #[serde(default)]
        path: PathKind,
        #[serde(default = "Command::default_max_depth")]
        max_depth: usize,
    },
    SwindleCheck {
        #[serde(default = "Command::default_support")]
        support: usize,
    },
    Collapse {
        #[serde(default = "Command::default_collapse_n")]
        n: usize,
        #[serde(default = "complex")]
        instance: Descriptor,
    },
    NormAudit {
        /// Audit this instance; otherwise every registered one.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        instance: Option<Descriptor>,
        #[serde(default = "Command::default_pairs")]
        pairs: usize,
    },
    TensorAudit {
        #[serde(default = "Command::default_scales")]
        scales: Vec<String>,
        #[serde(default = "Command::default_max_m")]
        max_m: i64,
        #[serde(default = "Command::default_support_bound")]
        support_bound: u64,
    },
}

impl Command {
    fn default_defect() -> f64 {
        0.2
    }
    fn default_variant() -> SeriesVariant {
        SeriesVariant::Corrected
    }
    fn default_path_n() -> usize {
        2
    }
    fn default_max_depth() -> usize {
        20
    }
    fn default_support() -> usize {
        4096
    }
    fn default_collapse_n() -> usize {
        16
    }
    fn default_pairs() -> usize {
        100
    }
    fn default_scales() -> Vec<String> {
        ["1/2", "1", "2", "3"].map(String::from).to_vec()
    }
    fn default_max_m() -> i64 {
        8
    }
    fn default_support_bound() -> u64 {
        8
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Lift { .. } => "lift",
            Command::Transfer { .. } => "transfer",
            Command::K0 { .. } => "k0",
            Command::PathTrivialize { .. } => "path-trivialize",
            Command::SwindleCheck { .. } => "swindle-check",
            Command::Collapse { .. } => "collapse",
            Command::NormAudit { .. } => "norm-audit",
            Command::TensorAudit { .. } => "tensor-audit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub execution: Execution,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            seed: 0,
            tol: default_tol(),
            trials: default_trials(),
            format: Format::default(),
            out: None,
            execution: Execution::default(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }
}

/// A labelled certificate as it appears in a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertRecord {
    pub label: String,
    pub valid: bool,
    pub entries: Vec<CertEntry>,
    pub advisory: Vec<CertEntry>,
}

impl CertRecord {
    pub fn new(label: impl Into<String>, cert: &Certificate) -> Self {
        Self {
            label: label.into(),
            valid: cert.valid(),
            entries: cert.entries().to_vec(),
            advisory: cert.advisory().to_vec(),
        }
    }
}

/// What a command produced: a result document and its certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub result: Value,
    pub certificates: Vec<CertRecord>,
}

impl Outcome {
    pub fn valid(&self) -> bool {
        self.certificates.iter().all(|c| c.valid)
    }
}

/// Process exit code and report bytes.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub exit_code: i32,
    pub report: Vec<u8>,
}

/// Runs `config`: exit 0 when every certificate is valid, 2 when some
/// certificate is not, 1 when the experiment could not run.
pub fn run(config: &ExperimentConfig) -> RunOutput {
    match execute(config).and_then(|o| render(config, &o).map(|r| (o.valid(), r))) {
        Ok((valid, report)) => RunOutput {
            exit_code: if valid { 0 } else { 2 },
            report,
        },
        Err(err) => RunOutput {
            exit_code: 1,
            report: error_report(config.command.name(), &err),
        },
    }
}

pub fn error_report(command: &str, err: &Error) -> Vec<u8> {
    let doc = json!({"schema": SCHEMA, "command": command, "error": err.to_string()});
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("json value");
    bytes.push(b'\n');
    bytes
}

/// Serializes a report in the configured format.
pub fn render(config: &ExperimentConfig, outcome: &Outcome) -> Result<Vec<u8>> {
    match config.format {
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA,
                "command": config.command.name(),
                "config": config,
                "valid": outcome.valid(),
                "result": outcome.result,
                "certificates": outcome.certificates,
            });
            let mut bytes = serde_json::to_vec_pretty(&doc)?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["schema", "command", "label", "name", "lhs", "rhs", "holds", "gating"])?;
            let schema = SCHEMA.to_string();
            for record in &outcome.certificates {
                let rows = record
                    .entries
                    .iter()
                    .map(|e| (e, true))
                    .chain(record.advisory.iter().map(|e| (e, false)));
                for (e, gating) in rows {
                    w.write_record([
                        schema.as_str(),
                        config.command.name(),
                        &record.label,
                        &e.name,
                        &format!("{:e}", e.lhs),
                        &format!("{:e}", e.rhs),
                        &e.holds().to_string(),
                        &gating.to_string(),
                    ])?;
                }
            }
            w.into_inner()
                .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
        }
    }
}

/// Runs the command and collects its result and certificates.
pub fn execute(config: &ExperimentConfig) -> Result<Outcome> {
    if !(config.tol > 0.0) {
        return Err(Error::Config(format!("tol must be positive, got {}", config.tol)));
    }
    match &config.command {
        Command::Lift {
            instance,
            element,
            defect,
            variant,
        } => match element {
            Some(value) => lift_element(instance, value, *variant, config.tol),
            None => lift_random(config, instance, *defect, *variant),
        },
        Command::Transfer {
            tower,
            direction,
            eps,
        } => transfer(config, tower, *direction, *eps),
        Command::K0 {
            instance,
            tower,
            element,
        } => k0(config, instance.as_ref(), tower.as_ref(), element.as_ref()),
        Command::PathTrivialize { n, path, max_depth } => paths(config, *n, *path, *max_depth),
        Command::SwindleCheck { support } => {
            let r = swindle_conjugator(*support)?;
            Ok(Outcome {
                result: serde_json::to_value(&r)?,
                certificates: vec![CertRecord::new("swindle", &r.cert)],
            })
        }
        Command::Collapse { n, instance } => {
            let ring = instance.build()?;
            let r = finite_collapse_certificate(&ring, *n)?;
            Ok(Outcome {
                result: serde_json::to_value(&r)?,
                certificates: vec![CertRecord::new("collapse", &r.cert)],
            })
        }
        Command::NormAudit { instance, pairs } => norm_audit(config, instance.as_ref(), *pairs),
        Command::TensorAudit {
            scales,
            max_m,
            support_bound,
        } => tensor_audit(scales, *max_m, *support_bound),
    }
}

fn summary(entries: &[(&str, f64)]) -> CertRecord {
    let mut cert = Certificate::new();
    for (name, count) in entries {
        cert.check(*name, *count, 0.0);
    }
    CertRecord::new("summary", &cert)
}

fn lift_element(
    instance: &Descriptor,
    value: &Value,
    variant: SeriesVariant,
    tol: f64,
) -> Result<Outcome> {
    let ring = instance.build()?;
    if !ring.is_real() {
        return Err(Error::Unsupported(
            "lifting needs an instance over complex scalars".into(),
        ));
    }
    let a = ring.elem_from_json(value)?;
    let t = ring.norm_f64(&ring.idempotent_defect(&a));
    let lift = lift_idempotent(&ring, &a, variant, tol)?;
    let result = json!({
        "variant": variant,
        "element": value,
        "input_defect": t,
        "idempotent": ring.elem_to_json(&lift.e),
        "defect": lift.defect(),
        "distance": ring.dist(&lift.e, &a),
    });
    Ok(Outcome {
        result,
        certificates: vec![CertRecord::new("lift", &lift.cert)],
    })
}

fn lift_trials<R: RealAlgebra>(
    ring: &R,
    config: &ExperimentConfig,
    variant: SeriesVariant,
    generate: impl Fn(u64) -> Result<R::Elem> + Sync,
) -> Result<Outcome> {
    let rows = crate::par::map_range(config.execution, config.trials, |trial| {
        let seed = trial_rng(config.seed, trial as u64).next_u64();
        let a = generate(seed)?;
        let t = ring.norm_f64(&ring.idempotent_defect(&a));
        let m = ring.norm_f64(&ring.sub(&ring.scale(&a, 2.0), &ring.one()));
        let lift = lift_idempotent(ring, &a, variant, config.tol)?;
        let row = json!({
            "trial": trial,
            "input_defect": t,
            "defect": lift.defect(),
            "distance": ring.dist(&lift.e, &a),
            "distance_bound": derived_distance_bound(m, t),
        });
        Ok((row, CertRecord::new(format!("trial-{trial}"), &lift.cert)))
    });
    let (rows, certificates): (Vec<_>, Vec<_>) = rows.into_iter().collect::<Result<Vec<_>>>()?.into_iter().unzip();
    Ok(Outcome {
        result: json!({"variant": variant, "trials": rows}),
        certificates,
    })
}

fn lift_random(
    config: &ExperimentConfig,
    instance: &Descriptor,
    defect: f64,
    variant: SeriesVariant,
) -> Result<Outcome> {
    match instance {
        Descriptor::Complex => lift_trials(&ComplexScalars, config, variant, |seed| {
            random_scalar_almost_idempotent(defect, seed)
        }),
        Descriptor::Matrix { n, norm, inner } if **inner == Descriptor::Complex => {
            let m = MatrixAlgebra::new(ComplexScalars, *n, *norm)?;
            lift_trials(&m, config, variant, |seed| random_almost_idempotent(&m, defect, seed))
        }
        other => Err(Error::Unsupported(format!(
            "random almost-idempotents need complex scalars or complex matrices, got {other:?}"
        ))),
    }
}

/// A descriptor resolved to one of the instances with class keys.
pub enum ClassifiedInstance {
    Complex(ComplexScalars),
    Matrix(MatrixAlgebra<ComplexScalars>),
    Sampled(SampledFunctionAlgebra<ComplexScalars>),
}

impl ClassifiedInstance {
    pub fn from_descriptor(d: &Descriptor) -> Result<Self> {
        match d {
            Descriptor::Complex => Ok(Self::Complex(ComplexScalars)),
            Descriptor::Matrix { n, norm, inner } if **inner == Descriptor::Complex => {
                Ok(Self::Matrix(MatrixAlgebra::new(ComplexScalars, *n, *norm)?))
            }
            Descriptor::Sampled { grid, inner } if **inner == Descriptor::Complex => Ok(
                Self::Sampled(SampledFunctionAlgebra::new(grid.clone(), ComplexScalars)?),
            ),
            other => Err(Error::Unsupported(format!("no K_0 computation for {other:?}"))),
        }
    }
}

macro_rules! with_classified {
    ($inst:expr, |$r:ident| $body:expr) => {
        match $inst {
            ClassifiedInstance::Complex($r) => $body,
            ClassifiedInstance::Matrix($r) => $body,
            ClassifiedInstance::Sampled($r) => $body,
        }
    };
}

macro_rules! with_tower {
    ($desc:expr, |$t:ident| $body:expr) => {
        match $desc {
            TowerDescriptor::Uhf { depth } => {
                let $t = make_uhf_tower(*depth)?;
                $body
            }
            TowerDescriptor::Cantor { depth } => {
                let $t = make_cantor_tower(*depth)?;
                $body
            }
            TowerDescriptor::Constant { instance, depth } => {
                match ClassifiedInstance::from_descriptor(instance)? {
                    ClassifiedInstance::Complex(r) => {
                        let $t = ConstantTower::new(r, *depth);
                        $body
                    }
                    ClassifiedInstance::Matrix(r) => {
                        let $t = ConstantTower::new(r, *depth);
                        $body
                    }
                    ClassifiedInstance::Sampled(r) => {
                        let $t = ConstantTower::new(r, *depth);
                        $body
                    }
                }
            }
        }
    };
}

pub fn k0_of_descriptor(d: &Descriptor) -> Result<K0Presentation> {
    Ok(with_classified!(ClassifiedInstance::from_descriptor(d)?, |r| r.k0()))
}

pub fn k0_of_tower(d: &TowerDescriptor) -> Result<K0Presentation> {
    Ok(with_tower!(d, |t| t.k0()))
}

fn classify<R: Classify>(ring: &R, value: &Value) -> Result<(Value, Certificate)> {
    let e = ring.elem_from_json(value)?;
    let (key, cert) = ring.class_key(&e)?;
    let class = ring.k0().class_map(&key)?;
    Ok((json!({"key": key, "class": class}), cert))
}

/// Random idempotents classified in each `k0` report.
pub const CLASS_MAP_SAMPLES: usize = 4;

fn instance_samples<R: Classify>(ring: &R, seed: u64) -> Result<(Vec<Value>, Certificate)> {
    let mut cert = Certificate::new();
    let mut samples = Vec::new();
    for index in 0..CLASS_MAP_SAMPLES {
        let e = ring.random_idempotent(&mut trial_rng(seed, index as u64))?;
        let (key, c) = ring.class_key(&e)?;
        cert.absorb(&format!("sample-{index}"), &c);
        let class = ring.k0().class_map(&key)?;
        samples.push(json!({"key": key, "class": class}));
    }
    Ok((samples, cert))
}

fn tower_samples<T: Tower>(tower: &T, seed: u64) -> Result<Vec<Value>> {
    let top = tower.depth();
    (0..CLASS_MAP_SAMPLES)
        .map(|index| {
            let e = tower.random_idempotent(top, &mut trial_rng(seed, index as u64))?;
            let key = tower.colimit_key(top, &e)?;
            let class = tower.k0().class_map(&key)?;
            Ok(json!({"level": top, "key": key, "class": class}))
        })
        .collect()
}

fn k0(
    config: &ExperimentConfig,
    instance: Option<&Descriptor>,
    tower: Option<&TowerDescriptor>,
    element: Option<&Value>,
) -> Result<Outcome> {
    let mut certificates = Vec::new();
    let (presentation, samples, classified) = match (instance, tower) {
        (Some(d), None) => {
            let inst = ClassifiedInstance::from_descriptor(d)?;
            let classified = match element {
                Some(v) => Some(with_classified!(&inst, |r| classify(r, v))?),
                None => None,
            };
            let (samples, cert) = with_classified!(&inst, |r| instance_samples(r, config.seed))?;
            certificates.push(CertRecord::new("samples", &cert));
            (with_classified!(&inst, |r| r.k0()), samples, classified)
        }
        (None, Some(t)) if element.is_none() => {
            let (presentation, samples) =
                with_tower!(t, |tw| (tw.k0(), tower_samples(&tw, config.seed)?));
            (presentation, samples, None)
        }
        (None, Some(_)) => {
            return Err(Error::Config("element classification needs an instance".into()))
        }
        _ => {
            return Err(Error::Config(
                "k0 needs exactly one of instance or tower".into(),
            ))
        }
    };
    let mut result = serde_json::to_value(&presentation)?;
    result["class_map_samples"] = Value::Array(samples);
    if let Some((class, cert)) = classified {
        result["element"] = class;
        certificates.push(CertRecord::new("class-key", &cert));
    }
    Ok(Outcome {
        result,
        certificates,
    })
}

fn transfer(
    config: &ExperimentConfig,
    tower: &TowerDescriptor,
    direction: Direction,
    eps: Option<f64>,
) -> Result<Outcome> {
    let exec = config.execution;
    with_tower!(tower, |t| match direction {
        Direction::Sur => {
            let r = k0_colimit_compare(&t, config.trials, config.seed, eps, config.tol, exec);
            let mut certificates: Vec<CertRecord> = r
                .trials
                .iter()
                .map(|x| CertRecord::new(format!("trial-{}", x.trial), &x.cert))
                .collect();
            let errors = r.trials.iter().filter(|x| x.error.is_some()).count();
            certificates.push(summary(&[
                ("mismatches", r.mismatches as f64),
                ("errors", errors as f64),
            ]));
            Ok(Outcome {
                result: json!({
                    "group": t.k0().group.to_string(),
                    "mismatches": r.mismatches,
                    "trials": r.trials,
                }),
                certificates,
            })
        }
        Direction::Inj => {
            let eps = eps.unwrap_or(0.01);
            let r = injectivity_experiment(&t, config.trials, config.seed, eps, config.tol, exec);
            let mut certificates: Vec<CertRecord> = r
                .trials
                .iter()
                .map(|x| CertRecord::new(format!("trial-{}", x.trial), &x.cert))
                .collect();
            let errors = r.trials.iter().filter(|x| x.error.is_some()).count();
            certificates.push(summary(&[("errors", errors as f64)]));
            Ok(Outcome {
                result: json!({
                    "eps": eps,
                    "violations": r.violations,
                    "trials": r.trials,
                }),
                certificates,
            })
        }
    })
}

fn paths(config: &ExperimentConfig, n: usize, kind: PathKind, max_depth: usize) -> Result<Outcome> {
    let m = path_instance(n)?;
    let path = match kind {
        PathKind::Rotation => rotation_path(n)?,
        PathKind::Jump => jump_path(n)?,
        PathKind::Constant => {
            let mut d = vec![0.0; n];
            d[0] = 1.0;
            constant_path(m.real_diag(&d))
        }
        PathKind::Random => {
            let r = homotopy_invariance_experiment(
                n,
                config.trials,
                config.seed,
                max_depth,
                config.tol,
                config.execution,
            )?;
            let mut certificates: Vec<CertRecord> = r
                .trials
                .iter()
                .map(|x| CertRecord::new(format!("trial-{}", x.trial), &x.cert))
                .collect();
            certificates.push(summary(&[("failures", r.failures as f64)]));
            return Ok(Outcome {
                result: serde_json::to_value(&r)?,
                certificates,
            });
        }
    };
    let r = path_trivialize(&m, &path, max_depth, config.tol)?;
    Ok(Outcome {
        result: json!({
            "path": kind,
            "n": n,
            "lipschitz_hint": path.lipschitz_hint,
            "key": r.key,
            "segments": r.segments,
            "unit": m.elem_to_json(&r.unit.u),
        }),
        certificates: vec![CertRecord::new("path", &r.cert)],
    })
}

fn audit_instance<R: BanachRing + Sample>(
    ring: &R,
    samples: usize,
    seed: u64,
    index: usize,
) -> Certificate {
    let mut rng = trial_rng(seed, index as u64);
    let xs: Vec<R::Elem> = (0..samples).map(|_| ring.sample(&mut rng)).collect();
    check_norm_axioms(ring, &xs)
}

fn norm_audit(config: &ExperimentConfig, instance: Option<&Descriptor>, pairs: usize) -> Result<Outcome> {
    let descriptors = match instance {
        Some(d) => vec![d.clone()],
        None => Descriptor::registered(),
    };
    // smallest k with k (k - 1) / 2 >= pairs
    let samples = (2..).find(|k| k * (k - 1) / 2 >= pairs).unwrap_or(2);
    let mut rows = Vec::new();
    let mut certificates = Vec::new();
    for (index, d) in descriptors.iter().enumerate() {
        let ring = d.build()?;
        let cert = audit_instance(&ring, samples, config.seed, index);
        rows.push(json!({"instance": d, "valid": cert.valid(), "arithmetic": ring.arithmetic()}));
        certificates.push(CertRecord::new(format!("instance-{index}"), &cert));
    }
    Ok(Outcome {
        result: json!({"samples": samples, "instances": rows}),
        certificates,
    })
}

fn tensor_audit(scales: &[String], max_m: i64, support_bound: u64) -> Result<Outcome> {
    let parsed = scales
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>>>()?;
    let mut cert = Certificate::new();
    let mut rows = Vec::new();
    for r in &parsed {
        for s in &parsed {
            for m in -max_m..=max_m {
                let value = tensor_norm_int(m, r, s, support_bound)?;
                let expected = r * s * num::BigRational::from_integer(m.abs().into());
                let name = format!("m={m},r={},s={}", format_rational(r), format_rational(s));
                cert.check(name, if value == expected { 0.0 } else { 1.0 }, 0.0);
                rows.push(json!({
                    "m": m,
                    "r": format_rational(r),
                    "s": format_rational(s),
                    "norm": format_rational(&value),
                }));
            }
        }
    }
    Ok(Outcome {
        result: json!({"support_bound": support_bound, "values": rows}),
        certificates: vec![CertRecord::new("tensor", &cert)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> ExperimentConfig {
        ExperimentConfig::from_json_str(json).unwrap()
    }

    fn report(out: &RunOutput) -> Value {
        serde_json::from_slice(&out.report).unwrap()
    }

    #[test]
    fn k0_on_matrix_reports_z() {
        let out = run(&cfg(r#"{"command":{"kind":"k0","instance":{"kind":"matrix","n":2}}}"#));
        assert_eq!(out.exit_code, 0);
        let doc = report(&out);
        assert_eq!(doc["schema"], 1);
        assert_eq!(doc["result"]["group"], "Z");
    }

    #[test]
    fn malformed_config_is_rejected() {
        assert!(ExperimentConfig::from_json_str("{").is_err());
        assert!(ExperimentConfig::from_json_str(r#"{"command":{"kind":"k0"},"bogus":1}"#).is_err());
        assert!(ExperimentConfig::from_json_str(
            r#"{"command":{"kind":"swindle-check","support":8,"extra":true}}"#
        )
        .is_err());
    }

    #[test]
    fn printed_lift_is_exit_two() {
        let out = run(&cfg(
            r#"{"command":{"kind":"lift","element":0.1,"variant":"printed"},"tol":1e-12}"#,
        ));
        assert_eq!(out.exit_code, 2);
        let doc = report(&out);
        assert!((doc["result"]["defect"].as_f64().unwrap() - 0.16).abs() < 1e-9);
        let corrected = run(&cfg(
            r#"{"command":{"kind":"lift","element":0.1,"variant":"corrected"},"tol":1e-12}"#,
        ));
        assert_eq!(corrected.exit_code, 0);
    }

    #[test]
    fn runtime_errors_are_exit_one() {
        let out = run(&cfg(r#"{"command":{"kind":"lift","element":2.0}}"#));
        assert_eq!(out.exit_code, 1);
        assert!(report(&out)["error"].is_string());
        let out = run(&cfg(r#"{"command":{"kind":"path-trivialize","path":"jump","max_depth":10}}"#));
        assert_eq!(out.exit_code, 1);
        let out = run(&cfg(r#"{"command":{"kind":"swindle-check","support":0}}"#));
        assert_eq!(out.exit_code, 1);
    }

    #[test]
    fn config_round_trips() {
        let c = cfg(
            r#"{"command":{"kind":"transfer","tower":{"kind":"uhf","depth":3},"direction":"inj"},"seed":7,"trials":3}"#,
        );
        let back = ExperimentConfig::from_json_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn reports_are_reproducible() {
        for json in [
            r#"{"command":{"kind":"lift","instance":{"kind":"matrix","n":3}},"trials":4,"seed":5}"#,
            r#"{"command":{"kind":"transfer","tower":{"kind":"cantor","depth":4}},"trials":4,"seed":5}"#,
            r#"{"command":{"kind":"path-trivialize","path":"random","n":3},"trials":3,"seed":5}"#,
        ] {
            let c = cfg(json);
            let a = run(&c);
            let mut seq = c.clone();
            seq.execution = Execution::Sequential;
            let b = run(&seq);
            assert_eq!(a.exit_code, 0, "{}", String::from_utf8_lossy(&a.report));
            let strip = |v: Value| v["result"].clone();
            assert_eq!(strip(report(&a)), strip(report(&b)));
            assert_eq!(a.report, run(&c).report);
        }
    }

    #[test]
    fn csv_has_one_row_per_entry() {
        let mut c = cfg(r#"{"command":{"kind":"collapse","n":3}}"#);
        c.format = Format::Csv;
        let out = run(&c);
        assert_eq!(out.exit_code, 0);
        let text = String::from_utf8(out.report).unwrap();
        assert!(text.starts_with("schema,command,label,name,lhs,rhs,holds,gating\n"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn audits_pass() {
        let out = run(&cfg(r#"{"command":{"kind":"norm-audit","pairs":20}}"#));
        assert_eq!(out.exit_code, 0, "{}", String::from_utf8_lossy(&out.report));
        let out = run(&cfg(r#"{"command":{"kind":"tensor-audit","max_m":4,"support_bound":2}}"#));
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn k0_of_towers_and_elements() {
        let out = run(&cfg(r#"{"command":{"kind":"k0","tower":{"kind":"uhf","depth":4}}}"#));
        assert_eq!(report(&out)["result"]["group"], "Z[1/2]");
        let out = run(&cfg(
            r#"{"command":{"kind":"k0","instance":{"kind":"sampled","grid":[0,1]},"element":[1,0]}}"#,
        ));
        assert_eq!(out.exit_code, 0, "{}", String::from_utf8_lossy(&out.report));
        assert_eq!(report(&out)["result"]["element"]["key"]["values"], json!([1, 0]));
        let out = run(&cfg(r#"{"command":{"kind":"k0"}}"#));
        assert_eq!(out.exit_code, 1);
    }
}
