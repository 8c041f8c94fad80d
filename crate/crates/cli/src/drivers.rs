//! Experiment drivers. Each turns resolved settings into files; every number
//! written comes from a `dke_core` operation.

use std::sync::Arc;

use anyhow::{bail, Result};
use dke_core::embedding::{
    embed, error_summary, gh_bound_finite, gh_bound_general, hausdorff_l2, Embedding, GeneralGhBound,
};
use dke_core::experiments::{
    bounds_table, eigenfunction_histogram, embedding_norm_histogram, estimate_default_ab, hausdorff_table,
    normalized_spectrum, sample_bottleneck, spectrum_of, Histogram, SpaceSpec,
};
use dke_core::persistence::{build_rips, GradedDiagram, StepFunction};
use dke_core::transforms::{
    direction_grid, eekt, epkt, equality_report, iekt, ipkt, transform_distances, Direction, EmbeddedComplex,
    EqualityReport, TransformDistance, TransformKind, TransformResult,
};
use dke_core::{AbStandardness, Error, MetricMeasureSpace, Spectrum};
use serde::{Deserialize, Serialize};

use crate::output::{csv_line, Output};
use crate::svg::{histogram_chart, line_chart, Series, Style};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedSpace {
    pub name: String,
    #[serde(flatten)]
    pub spec: SpaceSpec,
}

impl NamedSpace {
    pub fn build(&self) -> Result<MetricMeasureSpace> {
        Ok(self.spec.build()?.with_label(self.name.clone()))
    }

    fn spectrum(&self) -> Result<Spectrum> {
        Ok(spectrum_of(self.build()?)?)
    }
}

/// Joins an optional subdirectory and a file name.
fn at(dir: &str, name: &str) -> String {
    if dir.is_empty() {
        name.to_string()
    } else {
        format!("{dir}/{name}")
    }
}

fn num(x: f64) -> String {
    x.to_string()
}

pub fn sample(out: &mut Output, dir: &str, space: &NamedSpace) -> Result<()> {
    let m = space.build()?;
    out.write(&at(dir, "space.csv"), &m.to_csv())?;
    out.write(&at(dir, "space.json"), &m.to_json()?)?;
    Ok(())
}

/// Normalized eigenvalues of every space, one column per space.
pub fn spectrum(out: &mut Output, dir: &str, spaces: &[NamedSpace], count: usize) -> Result<()> {
    let mut columns = Vec::with_capacity(spaces.len());
    for s in spaces {
        columns.push(normalized_spectrum(&s.build()?, count)?);
    }
    let mut names = vec!["index".to_string()];
    names.extend(spaces.iter().map(|s| s.name.clone()));
    let mut csv = csv_line(&names);
    let rows = columns.iter().map(Vec::len).max().unwrap_or(0);
    for i in 0..rows {
        let mut line = vec![(i + 1).to_string()];
        line.extend(columns.iter().map(|c| c.get(i).map_or(String::new(), |v| num(*v))));
        csv.push_str(&csv_line(&line));
    }
    out.write(&at(dir, "spectrum.csv"), &csv)?;
    let series: Vec<Series> = spaces
        .iter()
        .zip(&columns)
        .map(|(s, c)| Series {
            label: s.name.clone(),
            points: c.iter().enumerate().map(|(i, v)| ((i + 1) as f64, *v)).collect(),
        })
        .collect();
    out.write(
        &at(dir, "spectrum.svg"),
        &line_chart("Normalized eigenvalues", "index", "eigenvalue", &series, Style::Line),
    )?;
    Ok(())
}

fn histogram_csv(h: &Histogram) -> String {
    let mut csv = csv_line(&["lower", "upper", "count"]);
    for (i, c) in h.counts.iter().enumerate() {
        csv.push_str(&csv_line(&[num(h.edges[i]), num(h.edges[i + 1]), c.to_string()]));
    }
    csv
}

#[derive(Serialize)]
struct EmbedSummary {
    space: String,
    k: usize,
    eigenvalues: Vec<f64>,
    /// Largest reconstruction error.
    a: f64,
    /// Largest embedding norm.
    b: f64,
}

/// Embedding coordinates, error summary and the norm and eigenfunction histograms.
/// `eigenfunctions` are 1-based indices; those beyond the spectrum are skipped.
pub fn embedding(
    out: &mut Output,
    dir: &str,
    space: &NamedSpace,
    k: usize,
    bins: usize,
    eigenfunctions: &[usize],
) -> Result<()> {
    let spec = space.spectrum()?;
    let emb = embed(&spec, k)?;
    let s = error_summary(&emb);
    out.write(&at(dir, "embedding.csv"), &emb.to_csv())?;
    out.write_json(
        &at(dir, "summary.json"),
        &EmbedSummary { space: space.name.clone(), k, eigenvalues: emb.eigenvalues().to_vec(), a: s.a, b: s.b },
    )?;
    let h = embedding_norm_histogram(&emb, bins)?;
    out.write(&at(dir, "norm_histogram.csv"), &histogram_csv(&h))?;
    out.write(
        &at(dir, "norm_histogram.svg"),
        &histogram_chart(&format!("|Phi_{k}(x)| on {}", space.name), "norm", &h.edges, &h.counts),
    )?;
    for &i in eigenfunctions.iter().filter(|&&i| i >= 1 && i <= spec.len()) {
        let h = eigenfunction_histogram(&spec, i - 1, bins)?;
        out.write(&at(dir, &format!("eigenfunction_{i}_histogram.csv")), &histogram_csv(&h))?;
        out.write(
            &at(dir, &format!("eigenfunction_{i}_histogram.svg")),
            &histogram_chart(&format!("|e_{i}(x)| on {}", space.name), "absolute value", &h.edges, &h.counts),
        )?;
    }
    Ok(())
}

/// Pairwise Hausdorff distances between truncated embeddings, for each `k`.
pub fn hausdorff(out: &mut Output, dir: &str, spaces: &[NamedSpace], ks: &[usize]) -> Result<()> {
    let spectra: Vec<(String, Spectrum)> =
        spaces.iter().map(|s| Ok((s.name.clone(), s.spectrum()?))).collect::<Result<_>>()?;
    let rows = hausdorff_table(&spectra, ks)?;
    let mut csv = csv_line(&["left", "right", "k", "distance"]);
    for r in &rows {
        csv.push_str(&csv_line(&[r.left.clone(), r.right.clone(), r.k.to_string(), num(r.distance)]));
    }
    out.write(&at(dir, "hausdorff.csv"), &csv)?;
    let mut series: Vec<Series> = Vec::new();
    for r in &rows {
        let label = format!("{} / {}", r.left, r.right);
        match series.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push((r.k as f64, r.distance)),
            None => series.push(Series { label, points: vec![(r.k as f64, r.distance)] }),
        }
    }
    out.write(
        &at(dir, "hausdorff.svg"),
        &line_chart("Hausdorff distance between embeddings", "k", "distance", &series, Style::Line),
    )?;
    Ok(())
}

#[derive(Serialize)]
struct BoundsReport<'a> {
    space: &'a str,
    standardness: AbStandardness,
    estimated: bool,
    rows: &'a [dke_core::experiments::BoundsRow],
}

/// Measured `A`, `B` and their analytic bounds per `k`. The standardness
/// triple is estimated from the space unless given.
pub fn bounds(out: &mut Output, dir: &str, space: &NamedSpace, ks: &[usize], ab: Option<AbStandardness>) -> Result<()> {
    let m = space.build()?;
    let (ab, estimated) = match ab {
        Some(ab) => (ab, false),
        None => (estimate_default_ab(&m)?, true),
    };
    let spec = spectrum_of(m)?;
    let rows = bounds_table(&spec, &ab, ks)?;
    let mut csv = csv_line(&[
        "k",
        "A",
        "B",
        "A_bound",
        "B_bound",
        "norm_bound_via_row_norm",
        "norm_bound_as_printed",
        "as_printed_violations",
    ]);
    for r in &rows {
        csv.push_str(&csv_line(&[
            r.k.to_string(),
            num(r.a),
            num(r.b),
            num(r.a_bound),
            num(r.b_bound),
            num(r.norm_bound_via_row_norm),
            num(r.norm_bound_as_printed),
            r.as_printed_violations.to_string(),
        ]));
    }
    out.write(&at(dir, "bounds.csv"), &csv)?;
    out.write_json(
        &at(dir, "bounds.json"),
        &BoundsReport { space: &space.name, standardness: ab, estimated, rows: &rows },
    )?;
    let series = vec![
        Series { label: "A".into(), points: rows.iter().map(|r| (r.k as f64, r.a)).collect() },
        Series { label: "B".into(), points: rows.iter().map(|r| (r.k as f64, r.b)).collect() },
    ];
    out.write(
        &at(dir, "bounds.svg"),
        &line_chart(&format!("Measured constants on {}", space.name), "k", "value", &series, Style::Line),
    )?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KindSelection {
    #[value(name = "ipkt")]
    IPkt,
    #[value(name = "epkt")]
    EPkt,
    #[value(name = "iekt")]
    IEkt,
    #[value(name = "eekt")]
    EEkt,
    All,
}

impl KindSelection {
    pub fn kinds(self) -> Vec<TransformKind> {
        match self {
            KindSelection::IPkt => vec![TransformKind::IPkt],
            KindSelection::EPkt => vec![TransformKind::EPkt],
            KindSelection::IEkt => vec![TransformKind::IEkt],
            KindSelection::EEkt => vec![TransformKind::EEkt],
            KindSelection::All => {
                vec![TransformKind::IPkt, TransformKind::EPkt, TransformKind::IEkt, TransformKind::EEkt]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSettings {
    pub k: usize,
    pub rips_scale: f64,
    /// Rips scale on the embedded points; defaults to `rips_scale`.
    #[serde(default)]
    pub embedded_scale: Option<f64>,
    #[serde(default = "default_dirs")]
    pub dirs: usize,
    pub direction_seed: u64,
    #[serde(default = "default_maxdim")]
    pub maxdim: usize,
    #[serde(default = "default_kinds")]
    pub kinds: Vec<TransformKind>,
}

pub fn default_dirs() -> usize {
    64
}

pub fn default_maxdim() -> usize {
    2
}

fn default_kinds() -> Vec<TransformKind> {
    KindSelection::All.kinds()
}

fn kind_name(kind: TransformKind) -> &'static str {
    match kind {
        TransformKind::IPkt => "ipkt",
        TransformKind::EPkt => "epkt",
        TransformKind::IEkt => "iekt",
        TransformKind::EEkt => "eekt",
    }
}

#[derive(Serialize)]
struct ExportEntry<'a> {
    direction: Vec<f64>,
    diagram: &'a GradedDiagram,
    #[serde(skip_serializing_if = "Option::is_none")]
    curve: Option<&'a StepFunction>,
    horizon: f64,
}

#[derive(Serialize)]
struct TransformMeta {
    kind: TransformKind,
    k: usize,
    rips_scale: Option<f64>,
    f_vector: Vec<usize>,
    directions: usize,
}

fn run_kind(
    kind: TransformKind,
    emb: &Embedding,
    intrinsic: &Arc<dke_core::persistence::SimplicialComplex>,
    embedded: &EmbeddedComplex,
    dirs: &[Direction],
) -> Result<TransformResult> {
    Ok(match kind {
        TransformKind::IPkt => ipkt(emb, intrinsic, dirs)?,
        TransformKind::IEkt => iekt(emb, intrinsic, dirs)?,
        kind => dke_core::transforms::embedded_transform(kind, emb, embedded, dirs)?,
    })
}

/// Runs the selected transforms and writes one JSON array per kind, their
/// metadata, and per-direction distances between intrinsic and embedded
/// versions when both were computed.
pub fn transform(out: &mut Output, dir: &str, space: &NamedSpace, t: &TransformSettings) -> Result<()> {
    if t.kinds.is_empty() {
        bail!(Error::InvalidParameter("no transform kinds selected".into()));
    }
    let spec = space.spectrum()?;
    let emb = embed(&spec, t.k)?;
    let dirs = direction_grid(t.k, t.dirs, t.direction_seed)?;
    let intrinsic = Arc::new(build_rips(spec.space(), t.rips_scale, t.maxdim)?);
    let embedded = EmbeddedComplex::build(&emb, t.embedded_scale.unwrap_or(t.rips_scale), t.maxdim)?;

    let mut results: Vec<TransformResult> = Vec::new();
    let mut meta = Vec::new();
    for &kind in &t.kinds {
        let res = run_kind(kind, &emb, &intrinsic, &embedded, &dirs)?;
        let export: Vec<ExportEntry> = res
            .entries
            .iter()
            .map(|e| ExportEntry {
                direction: e.direction.to_vector(),
                diagram: &e.diagram,
                curve: e.curve.as_ref(),
                horizon: e.horizon,
            })
            .collect();
        out.write_json(&at(dir, &format!("transform_{}.json", kind_name(kind))), &export)?;
        meta.push(TransformMeta {
            kind,
            k: res.k,
            rips_scale: res.rips_scale,
            f_vector: res.f_vector.clone(),
            directions: res.entries.len(),
        });
        if kind.is_euler() {
            let series: Vec<Series> = res
                .entries
                .iter()
                .take(4)
                .enumerate()
                .map(|(i, e)| {
                    let c = e.curve.as_ref().expect("Euler transforms carry curves");
                    let mut points: Vec<(f64, f64)> = c
                        .breakpoints()
                        .iter()
                        .enumerate()
                        .map(|(j, &x)| (x, c.values().get(j).copied().unwrap_or(0.0)))
                        .collect();
                    if points.is_empty() {
                        points.push((0.0, 0.0));
                    }
                    Series { label: format!("direction {}", i + 1), points }
                })
                .collect();
            out.write(
                &at(dir, &format!("transform_{}.svg", kind_name(kind))),
                &line_chart(&format!("Euler curves ({})", kind_name(kind)), "height", "chi", &series, Style::Step),
            )?;
        }
        results.push(res);
    }
    out.write_json(&at(dir, "transform_meta.json"), &meta)?;

    let find = |k: TransformKind| results.iter().find(|r| r.kind == k);
    let mut columns: Vec<(&str, Vec<f64>)> = Vec::new();
    if let (Some(i), Some(e)) = (find(TransformKind::IPkt), find(TransformKind::EPkt)) {
        columns.push(("ipkt_vs_epkt_bottleneck", transform_distances(i, e, TransformDistance::Bottleneck)?));
    }
    if let (Some(i), Some(e)) = (find(TransformKind::IEkt), find(TransformKind::EEkt)) {
        columns.push(("iekt_vs_eekt_l1", transform_distances(i, e, TransformDistance::EulerLp { p: 1.0 })?));
    }
    if !columns.is_empty() {
        let mut head = vec!["direction".to_string()];
        head.extend(columns.iter().map(|c| c.0.to_string()));
        let mut csv = csv_line(&head);
        for d in 0..dirs.len() {
            let mut line = vec![(d + 1).to_string()];
            line.extend(columns.iter().map(|c| num(c.1[d])));
            csv.push_str(&csv_line(&line));
        }
        out.write(&at(dir, "transform_summary.csv"), &csv)?;
    }
    Ok(())
}

/// A bound that was either evaluated or refused.
#[derive(Debug, Clone, Serialize)]
pub struct BoundOutcome {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_violation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unavailable: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransformComparison {
    pub k: usize,
    pub directions: usize,
    /// Largest graded bottleneck distance between the embedded persistence transforms.
    pub epkt: EqualityReport,
    /// Largest `L^1` distance between the embedded Euler transforms.
    pub eekt_l1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub left: String,
    pub right: String,
    pub k: usize,
    pub hausdorff: f64,
    pub gh_bound_general: GeneralGhBound,
    /// Evaluated with the Hausdorff distance as epsilon.
    pub gh_bound_finite: f64,
    /// Bottleneck distance between the two samples, when both come from one space.
    pub sample_bottleneck: Option<f64>,
    pub stability_bound: BoundOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transforms: Option<TransformComparison>,
}

impl CompareReport {
    pub fn violations(&self) -> Vec<&str> {
        self.stability_bound.hypothesis_violation.iter().map(String::as_str).collect()
    }
}

pub fn compare(
    out: &mut Output,
    dir: &str,
    x: &NamedSpace,
    y: &NamedSpace,
    k: usize,
    transforms: Option<&TransformSettings>,
) -> Result<CompareReport> {
    let (sx, sy) = (x.spectrum()?, y.spectrum()?);
    let (ex, ey) = (embed(&sx, k)?, embed(&sy, k)?);
    let eps = hausdorff_l2(&ex, &ey)?;
    let general = gh_bound_general(&ex, &ey)?;
    let finite = gh_bound_finite(&sx, &sy, k, eps)?;
    let sample = sample_bottleneck(&x.spec, &y.spec)?;
    let stability = match sample {
        None => BoundOutcome {
            value: None,
            hypothesis_violation: None,
            unavailable: Some("the two spaces are not seeded samples of one space".into()),
        },
        Some(e) => match dke_core::embedding::stability_bound(sx.eigenvalues(), sy.eigenvalues(), k, e) {
            Ok(v) => BoundOutcome { value: Some(v), hypothesis_violation: None, unavailable: None },
            Err(err @ Error::Hypothesis { .. }) => {
                BoundOutcome { value: None, hypothesis_violation: Some(err.to_string()), unavailable: None }
            }
            Err(err) => return Err(err.into()),
        },
    };
    let transforms = match transforms {
        None => None,
        Some(t) => {
            let dirs = direction_grid(k, t.dirs, t.direction_seed)?;
            let scale = t.embedded_scale.unwrap_or(t.rips_scale);
            let (px, py) = (epkt(&ex, &dirs, scale, t.maxdim)?, epkt(&ey, &dirs, scale, t.maxdim)?);
            let (cx, cy) = (eekt(&ex, &dirs, scale, t.maxdim)?, eekt(&ey, &dirs, scale, t.maxdim)?);
            let epkt_report = equality_report(&px, &py, TransformDistance::Bottleneck, general.a_x, general.a_y)?;
            let l1 = dke_core::transforms::transform_distance(&cx, &cy, TransformDistance::EulerLp { p: 1.0 })?;
            Some(TransformComparison { k, directions: dirs.len(), epkt: epkt_report, eekt_l1: l1 })
        }
    };
    let report = CompareReport {
        left: x.name.clone(),
        right: y.name.clone(),
        k,
        hausdorff: eps,
        gh_bound_general: general,
        gh_bound_finite: finite,
        sample_bottleneck: sample,
        stability_bound: stability,
        transforms,
    };
    out.write_json(&at(dir, "compare.json"), &report)?;
    Ok(report)
}
