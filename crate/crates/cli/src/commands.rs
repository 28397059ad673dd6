use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sadic_core::dimension::{
    besicovitch_eggleston, box_dimension_estimate, covering_points, covering_report, g_dimension_sup,
    nonuniform_be_sequence, upper_dimension_bound, CoveringReport, PBound,
};
use sadic_core::frequency::{classify_with_profile, geometric_checkpoints, Checkpoint, ClassificationConfig};
use sadic_core::measure::{cdf, dimension_of_measure, entropy_sequence, mu_p, sample_indexed, EntropyRatioSample};
use sadic_core::stream::random_stream_indexed;
use sadic_core::transform::{f_inverse, f_tagged, probe_oscillation, LayoutCursor, OscillationReport, Slot, Tag};
use sadic_core::{
    classify, evaluate_prefix, Base, ClassTag, DimensionReport, Error, Provenance, Result, StochasticVector,
    TransformParams, Verdict,
};

use crate::args::*;
use crate::output::{float, opt, Report, Tabular};
use crate::params;

pub use sadic_core::source::parse_rational;

fn f64_of(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn transform_params(base: u32, p: u64) -> Result<TransformParams> {
    TransformParams::new(base, p)
}

// ---- classify ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyResult {
    pub source: String,
    pub tag: ClassTag,
    pub set: String,
    pub depth: u64,
    pub counts: Vec<u64>,
    pub verdicts: Vec<Verdict>,
    pub checkpoints: Vec<Checkpoint>,
}

impl Tabular for ClassifyResult {
    fn header() -> Vec<&'static str> {
        vec!["tag", "set", "digit", "count", "verdict", "estimate", "estimate_f64", "spread", "spread_f64"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        if self.verdicts.is_empty() {
            return vec![vec![format!("{:?}", self.tag), self.set.clone()]];
        }
        self.verdicts
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let (name, est) = match v {
                    Verdict::Converged { estimate, .. } => ("converged", Some(estimate)),
                    Verdict::Oscillating { .. } => ("oscillating", None),
                };
                vec![
                    format!("{:?}", self.tag),
                    self.set.clone(),
                    i.to_string(),
                    self.counts[i].to_string(),
                    name.to_string(),
                    opt(&est),
                    est.map(|e| float(f64_of(e))).unwrap_or_default(),
                    v.spread().to_string(),
                    float(f64_of(v.spread())),
                ]
            })
            .collect()
    }
}

pub fn cmd_classify(a: &ClassifyArgs) -> Result<Report<ClassifyResult>> {
    let base = Base::new(a.base)?;
    let ratio = parse_rational(&a.checkpoint_ratio)?;
    let (num, den) = (ratio.numer().to_u64(), ratio.denom().to_u64());
    let (Some(num), Some(den)) = (num, den) else {
        return Err(Error::Parameter("checkpoint ratio must be a positive fraction".into()));
    };
    let checkpoints = geometric_checkpoints(a.checkpoint_start, num, den, a.depth)?;
    let cfg = ClassificationConfig::with_depth(a.depth)
        .checkpoints(checkpoints)
        .delta(parse_rational(&a.delta)?)
        .epsilon(parse_rational(&a.epsilon)?);
    let mut stream = a.source.open(base, a.seed)?;
    let (class, profile) = classify_with_profile(&mut stream, &cfg)?;
    let result = ClassifyResult {
        source: a.source.to_string(),
        tag: class.tag,
        set: class.tag.set_name().to_string(),
        depth: profile.depth,
        counts: profile.counts,
        verdicts: class.verdicts,
        checkpoints: profile.checkpoints,
    };
    let params = params! {
        "base" => a.base, "source" => &a.source, "depth" => a.depth, "seed" => a.seed,
        "delta" => &cfg.delta, "epsilon" => &cfg.epsilon, "checkpoint_ratio" => &ratio,
        "checkpoint_start" => a.checkpoint_start,
    };
    Ok(Report::new("classify", params, vec![result], Provenance::Computed))
}

// ---- transform ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformRow {
    /// Position in the transformed stream.
    pub position: u64,
    pub digit: u8,
    /// `fixed` or `free`.
    pub class: String,
    /// Source digit index carried by a free position.
    pub source_index: Option<u64>,
}

impl Tabular for TransformRow {
    fn header() -> Vec<&'static str> {
        vec!["position", "digit", "class", "source_index"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![self.position.to_string(), self.digit.to_string(), self.class.clone(), opt(&self.source_index)]]
    }
}

pub fn cmd_transform(a: &TransformArgs) -> Result<Report<TransformRow>> {
    let params = transform_params(a.base, a.p)?;
    let x = a.source.open(params.base(), a.seed)?;
    let rows = match a.direction {
        Direction::Forward => f_tagged(&params, x)?
            .take(a.n)
            .zip(1u64..)
            .map(|(t, position)| TransformRow {
                position,
                digit: t.digit,
                class: if matches!(t.tag, Tag::Fixed) { "fixed" } else { "free" }.to_string(),
                source_index: match t.tag {
                    Tag::Free(j) => Some(j),
                    Tag::Fixed => None,
                },
            })
            .collect(),
        Direction::Inverse => {
            let free_positions = LayoutCursor::new(&params)
                .zip(1u64..)
                .filter(|(slot, _)| *slot == Slot::Free)
                .map(|(_, n)| n);
            f_inverse(&params, x)?
                .take(a.n)
                .zip(free_positions)
                .zip(1u64..)
                .map(|((d, position), j)| {
                    Ok(TransformRow { position, digit: d?, class: "free".into(), source_index: Some(j) })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let direction = match a.direction {
        Direction::Forward => "forward",
        Direction::Inverse => "inverse",
    };
    let p = params! { "base" => a.base, "p" => a.p, "source" => &a.source, "n" => a.n, "direction" => direction, "seed" => a.seed };
    Ok(Report::new("transform", p, rows, Provenance::Computed))
}

// ---- dimension ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionRow {
    #[serde(flatten)]
    pub report: DimensionReport,
}

impl Tabular for DimensionRow {
    fn header() -> Vec<&'static str> {
        vec!["kind", "exact", "numeric", "provenance", "note"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let r = &self.report;
        vec![vec![r.kind.clone(), opt(&r.exact), float(r.numeric), r.provenance.to_string(), opt(&r.note)]]
    }
}

fn parse_nu(text: &str) -> Result<StochasticVector> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.iter().all(|p| !p.contains('.') && !p.contains('e')) {
        StochasticVector::exact(parts.iter().map(|p| parse_rational(p)).collect::<Result<_>>()?)
    } else {
        let v = parts
            .iter()
            .map(|p| p.parse::<f64>().map_err(|_| Error::Parameter(format!("invalid frequency '{p}'"))))
            .collect::<Result<_>>()?;
        StochasticVector::float(v)
    }
}

pub fn cmd_be(a: &BeArgs) -> Result<Report<DimensionRow>> {
    let base = Base::new(a.base)?;
    let nu = parse_nu(&a.nu)?;
    let report = besicovitch_eggleston(&nu, base)?;
    let p = params! { "base" => a.base, "nu" => &a.nu };
    Ok(Report::new("dimension be", p, vec![DimensionRow { report }], Provenance::Computed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringResult {
    #[serde(with = "sadic_core::serde_rational")]
    pub critical_alpha: BigRational,
    pub coverings: Vec<CoveringRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringRow {
    #[serde(flatten)]
    pub covering: CoveringReport,
    /// `log_s` of the alpha-volume at the critical alpha.
    #[serde(with = "sadic_core::serde_rational")]
    pub critical_volume_log: BigRational,
}

impl Tabular for CoveringResult {
    fn header() -> Vec<&'static str> {
        vec!["k", "rank", "count_log", "mesh_log", "critical_alpha", "critical_volume_log"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.coverings
            .iter()
            .map(|c| {
                vec![
                    c.covering.k.to_string(),
                    c.covering.rank.to_string(),
                    c.covering.count_log().to_string(),
                    opt(&c.covering.mesh.exact_log()),
                    self.critical_alpha.to_string(),
                    c.critical_volume_log.to_string(),
                ]
            })
            .collect()
    }
}

pub fn cmd_covering(a: &CoveringArgs) -> Result<Report<CoveringResult>> {
    let params = transform_params(a.base, a.p)?;
    if a.k == 0 {
        return Err(Error::Parameter("K must be at least 1".into()));
    }
    let alpha = upper_dimension_bound(&params)?;
    let coverings = (1..=a.k)
        .map(|k| {
            let covering = covering_report(&params, k)?;
            let critical_volume_log = covering.alpha_volume(&alpha).exact_log().cloned().expect("exact");
            Ok(CoveringRow { covering, critical_volume_log })
        })
        .collect::<Result<Vec<_>>>()?;
    let p = params! { "base" => a.base, "p" => a.p, "K" => a.k };
    Ok(Report::new("dimension covering", p, vec![CoveringResult { critical_alpha: alpha, coverings }], Provenance::Computed))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureDimensionResult {
    #[serde(with = "sadic_core::serde_rational")]
    pub limit: BigRational,
    pub matches_closed_form: bool,
    pub minima_at_checkpoints: bool,
    pub samples: Vec<EntropyRatioSample>,
}

impl Tabular for MeasureDimensionResult {
    fn header() -> Vec<&'static str> {
        vec!["k", "n", "c_n", "ratio", "ratio_f64", "closed_form", "limit"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.samples
            .iter()
            .map(|s| {
                vec![
                    s.k.to_string(),
                    s.n.to_string(),
                    s.coefficient.to_string(),
                    s.ratio.to_string(),
                    float(f64_of(&s.ratio)),
                    s.closed_form.to_string(),
                    self.limit.to_string(),
                ]
            })
            .collect()
    }
}

pub fn cmd_measure_dimension(a: &CoveringArgs) -> Result<Report<MeasureDimensionResult>> {
    let params = transform_params(a.base, a.p)?;
    let d = dimension_of_measure(&mu_p(&params), a.k)?;
    let result = MeasureDimensionResult {
        limit: d.limit.clone(),
        matches_closed_form: d.matches_closed_form(),
        minima_at_checkpoints: d.minima_at_checkpoints(),
        samples: d.samples,
    };
    let p = params! { "base" => a.base, "p" => a.p, "K" => a.k };
    Ok(Report::new("dimension measure", p, vec![result], Provenance::Computed))
}

pub fn cmd_estimate(a: &CoveringArgs) -> Result<Report<DimensionRow>> {
    let params = transform_params(a.base, a.p)?;
    if a.k < 2 {
        return Err(Error::Parameter("K must be at least 2 for a slope".into()));
    }
    let points = covering_points(&params, 1..=a.k)?;
    let slope = box_dimension_estimate(&points)?;
    let exact = upper_dimension_bound(&params)?;
    let report = DimensionReport::numeric("box-estimate", slope, Provenance::Estimated)
        .with_note(format!("least-squares slope over k = 1..{}; exact bound {exact}", a.k));
    let p = params! { "base" => a.base, "p" => a.p, "K" => a.k };
    Ok(Report::new("dimension estimate", p, vec![DimensionRow { report }], Provenance::Estimated))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GSupResult {
    #[serde(flatten)]
    pub report: DimensionReport,
    pub argmax: u64,
    #[serde(with = "sadic_core::serde_rational")]
    pub limit: BigRational,
    pub bounds: Vec<PBound>,
}

impl Tabular for GSupResult {
    fn header() -> Vec<&'static str> {
        vec!["kind", "exact", "numeric", "argmax", "limit", "provenance", "note"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let r = &self.report;
        vec![vec![
            r.kind.clone(),
            opt(&r.exact),
            float(r.numeric),
            self.argmax.to_string(),
            self.limit.to_string(),
            r.provenance.to_string(),
            opt(&r.note),
        ]]
    }
}

pub fn cmd_gsup(a: &GSupArgs) -> Result<Report<GSupResult>> {
    let ps: Vec<u64> = (1..=a.pmax).collect();
    let g = g_dimension_sup(&ps)?;
    let result = GSupResult { report: g.to_report(), argmax: g.argmax, limit: g.limit, bounds: g.values };
    Ok(Report::new("dimension g-sup", params! { "pmax" => a.pmax }, vec![result], Provenance::Computed))
}

// ---- measure ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub index: u64,
    pub digits: String,
    #[serde(with = "sadic_core::serde_rational")]
    pub value: BigRational,
}

impl Tabular for SampleRow {
    fn header() -> Vec<&'static str> {
        vec!["index", "digits", "value", "value_f64"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![self.index.to_string(), self.digits.clone(), self.value.to_string(), float(f64_of(&self.value))]]
    }
}

pub fn cmd_sample(a: &SampleArgs) -> Result<Report<SampleRow>> {
    let params = transform_params(a.base, a.p)?;
    let m = mu_p(&params);
    let rows = (0..a.count)
        .into_par_iter()
        .map(|index| {
            let d = sample_indexed(&m, a.n, a.seed, index)?;
            let value = evaluate_prefix(&d, params.base())?;
            let digits: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            Ok(SampleRow { index, digits: digits.join(","), value })
        })
        .collect::<Result<Vec<_>>>()?;
    let p = params! { "base" => a.base, "p" => a.p, "n" => a.n, "seed" => a.seed, "count" => a.count };
    Ok(Report::new("measure sample", p, rows, Provenance::Estimated))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdfRow {
    #[serde(with = "sadic_core::serde_rational")]
    pub t: BigRational,
    #[serde(with = "sadic_core::serde_rational")]
    pub lower: BigRational,
    #[serde(with = "sadic_core::serde_rational")]
    pub upper: BigRational,
}

impl Tabular for CdfRow {
    fn header() -> Vec<&'static str> {
        vec!["t", "lower", "upper", "lower_f64", "upper_f64"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.t.to_string(),
            self.lower.to_string(),
            self.upper.to_string(),
            float(f64_of(&self.lower)),
            float(f64_of(&self.upper)),
        ]]
    }
}

pub fn cmd_cdf(a: &CdfArgs) -> Result<Report<CdfRow>> {
    let params = transform_params(a.base, a.p)?;
    let m = mu_p(&params);
    let rows = a
        .t
        .split(',')
        .map(|t| {
            let t = parse_rational(t)?;
            let iv = cdf(&m, &t, a.precision)?;
            Ok(CdfRow { t, lower: iv.lower, upper: iv.upper })
        })
        .collect::<Result<Vec<_>>>()?;
    let p = params! { "base" => a.base, "p" => a.p, "t" => &a.t, "precision" => a.precision };
    Ok(Report::new("measure cdf", p, rows, Provenance::Computed))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub n: u64,
    /// `c_n = H_n / ln s`.
    #[serde(with = "sadic_core::serde_rational")]
    pub coefficient: BigRational,
    #[serde(with = "sadic_core::serde_rational")]
    pub ratio: BigRational,
    /// `m_k` for a row at the end of a fixed segment, else empty.
    pub marker: Option<String>,
}

impl Tabular for EntropyRow {
    fn header() -> Vec<&'static str> {
        vec!["n", "c_n", "ratio", "ratio_f64", "marker"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.n.to_string(),
            self.coefficient.to_string(),
            self.ratio.to_string(),
            float(f64_of(&self.ratio)),
            opt(&self.marker),
        ]]
    }
}

/// Longest `--all` entropy listing.
pub const MAX_ENTROPY_ROWS: u64 = 1 << 20;

pub fn cmd_entropy(a: &EntropyArgs) -> Result<Report<EntropyRow>> {
    let params = transform_params(a.base, a.p)?;
    let m = mu_p(&params);
    let d = dimension_of_measure(&m, a.k)?;
    let marker = |n: u64| d.samples.iter().find(|s| s.n == n).map(|s| format!("m_{}", s.k));
    let rows = if a.all {
        let last = d.samples.last().map_or(0, |s| s.n);
        if last > MAX_ENTROPY_ROWS {
            return Err(Error::Resource(format!("m_{} = {last} rows exceeds {MAX_ENTROPY_ROWS}", a.k)));
        }
        let seq = entropy_sequence(&m, last as usize)?;
        seq.partial_sums()
            .into_iter()
            .zip(1u64..)
            .map(|(h, n)| {
                let c = h.exact().cloned().expect("mu_p entropies are exact");
                EntropyRow { n, ratio: &c / BigInt::from(n), coefficient: c, marker: marker(n) }
            })
            .collect()
    } else {
        d.samples
            .iter()
            .map(|s| EntropyRow {
                n: s.n,
                coefficient: BigRational::from_integer(s.coefficient.into()),
                ratio: s.ratio.clone(),
                marker: marker(s.n),
            })
            .collect()
    };
    let p = params! { "base" => a.base, "p" => a.p, "K" => a.k, "all" => a.all };
    Ok(Report::new("measure entropy", p, rows, Provenance::Computed))
}

// ---- table ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub set: String,
    /// Monte Carlo fraction of uniform random streams falling in this class.
    #[serde(with = "sadic_core::serde_rational")]
    pub lebesgue: BigRational,
    pub lebesgue_provenance: Provenance,
    pub hausdorff: String,
    pub hausdorff_numeric: f64,
    pub hausdorff_provenance: Provenance,
    pub category: String,
    pub category_provenance: Provenance,
}

impl Tabular for TableRow {
    fn header() -> Vec<&'static str> {
        vec![
            "set",
            "lebesgue",
            "lebesgue_f64",
            "lebesgue_provenance",
            "hausdorff",
            "hausdorff_f64",
            "hausdorff_provenance",
            "category",
            "category_provenance",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.set.clone(),
            self.lebesgue.to_string(),
            float(f64_of(&self.lebesgue)),
            self.lebesgue_provenance.to_string(),
            self.hausdorff.clone(),
            float(self.hausdorff_numeric),
            self.hausdorff_provenance.to_string(),
            self.category.clone(),
            self.category_provenance.to_string(),
        ]]
    }
}

/// Class counts of `samples` uniform random streams, in `ClassTag::ALL` order.
pub fn monte_carlo_classes(base: Base, depth: u64, samples: u64, seed: u64) -> Result<[u64; 5]> {
    let cfg = ClassificationConfig::with_depth(depth);
    let tags = (0..samples)
        .into_par_iter()
        .map(|i| classify(&mut random_stream_indexed(base, seed, i), &cfg).map(|c| c.tag))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = [0u64; 5];
    for t in tags {
        let idx = ClassTag::ALL.iter().position(|&a| a == t).expect("listed");
        counts[idx] += 1;
    }
    Ok(counts)
}

pub fn cmd_table(a: &TableArgs) -> Result<Report<TableRow>> {
    let base = Base::new(a.base)?;
    if a.samples == 0 {
        return Err(Error::Parameter("samples must be at least 1".into()));
    }
    let counts = monte_carlo_classes(base, a.depth, a.samples, a.seed)?;
    let frac = |tag: ClassTag| {
        let idx = ClassTag::ALL.iter().position(|&t| t == tag).expect("listed");
        BigRational::new(counts[idx].into(), a.samples.into())
    };
    let mut rows = Vec::with_capacity(4);

    let uniform = besicovitch_eggleston(&StochasticVector::uniform(base), base)?;
    rows.push(TableRow {
        set: "N_s".into(),
        lebesgue: frac(ClassTag::Normal),
        lebesgue_provenance: Provenance::Estimated,
        hausdorff: opt(&uniform.exact),
        hausdorff_numeric: uniform.numeric,
        hausdorff_provenance: Provenance::Computed,
        category: "first".into(),
        category_provenance: Provenance::Cited,
    });

    let be_seq = if a.base >= 3 { nonuniform_be_sequence(base, 20)? } else { Vec::new() };
    let be_last = be_seq.last().map_or(1.0, |v| v.1);
    rows.push(TableRow {
        set: "W_s".into(),
        lebesgue: frac(ClassTag::Quasinormal),
        lebesgue_provenance: Provenance::Estimated,
        hausdorff: "sup_nu be(nu) = 1".into(),
        hausdorff_numeric: be_last,
        hausdorff_provenance: Provenance::Computed,
        category: "first".into(),
        category_provenance: Provenance::Cited,
    });

    if a.base == 2 {
        rows.push(TableRow {
            set: "T_s".into(),
            lebesgue: frac(ClassTag::ParticularlyNonNormal),
            lebesgue_provenance: Provenance::Estimated,
            hausdorff: "0 (T_2 is empty)".into(),
            hausdorff_numeric: 0.0,
            hausdorff_provenance: Provenance::Computed,
            category: "empty set".into(),
            category_provenance: Provenance::Cited,
        });
    } else {
        let ps: Vec<u64> = (1..=a.pmax.max(1)).collect();
        let g = g_dimension_sup(&ps)?;
        rows.push(TableRow {
            set: "T_s".into(),
            lebesgue: frac(ClassTag::ParticularlyNonNormal),
            lebesgue_provenance: Provenance::Estimated,
            hausdorff: format!("sup_p p/(p+2) = 1 (p <= {}: {})", g.argmax, g.sup),
            hausdorff_numeric: f64_of(&g.sup),
            hausdorff_provenance: Provenance::Computed,
            category: "first".into(),
            category_provenance: Provenance::Cited,
        });
    }

    rows.push(TableRow {
        set: "L_s".into(),
        lebesgue: frac(ClassTag::EssentiallyNonNormal),
        lebesgue_provenance: Provenance::Estimated,
        hausdorff: "1 (cited)".into(),
        hausdorff_numeric: 1.0,
        hausdorff_provenance: Provenance::Cited,
        category: "second".into(),
        category_provenance: Provenance::Cited,
    });

    let undetermined = frac(ClassTag::Undetermined);
    let p = params! {
        "base" => a.base, "pmax" => a.pmax, "depth" => a.depth, "samples" => a.samples,
        "seed" => a.seed, "undetermined" => undetermined,
    };
    Ok(Report::new("table", p, rows, Provenance::Computed))
}

// ---- oscillation ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscillationResult {
    #[serde(flatten)]
    pub report: OscillationReport,
}

impl Tabular for OscillationResult {
    fn header() -> Vec<&'static str> {
        vec![
            "k",
            "lower_position",
            "lower_ratio",
            "lower_f64",
            "upper_position",
            "upper_ratio",
            "upper_f64",
            "gap_f64",
            "partial_group_count",
            "realized",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let realized = serde_json::to_value(self.report.realized).expect("enum").as_str().unwrap_or("").to_string();
        self.report
            .samples
            .iter()
            .map(|s| {
                vec![
                    s.k.to_string(),
                    s.lower_position.to_string(),
                    s.lower_ratio.to_string(),
                    float(f64_of(&s.lower_ratio)),
                    s.upper_position.to_string(),
                    s.upper_ratio.to_string(),
                    float(f64_of(&s.upper_ratio)),
                    float(f64_of(&(&s.upper_ratio - &s.lower_ratio))),
                    s.partial_group_count.to_string(),
                    realized.clone(),
                ]
            })
            .collect()
    }
}

pub fn cmd_oscillation(a: &OscillationArgs) -> Result<Report<OscillationResult>> {
    let params = transform_params(a.base, a.p)?;
    if a.kmin == 0 || a.kmin > a.kmax {
        return Err(Error::Parameter("need 1 <= kmin <= kmax".into()));
    }
    a.source.open(params.base(), a.seed)?;
    let ks: Vec<u64> = (a.kmin..=a.kmax).collect();
    let report = probe_oscillation(&params, a.digit, &ks, || {
        a.source.open(params.base(), a.seed).expect("source opened above")
    })?;
    let p = params! {
        "base" => a.base, "p" => a.p, "digit" => a.digit, "kmin" => a.kmin, "kmax" => a.kmax,
        "source" => &a.source, "seed" => a.seed,
        "lower" => &report.limits.lower, "upper" => &report.limits.upper,
        "alternative_upper" => &report.limits.alternative_upper,
    };
    Ok(Report::new("oscillation", p, vec![OscillationResult { report }], Provenance::Computed))
}
