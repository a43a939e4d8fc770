use nearfield_core::flux::{
    default_grid_order, flux_profile, optical_theorem_defect, optical_theorem_defect_at,
    printed_series_diagnostic, unitarity_defect, wronskian_series, FluxEvaluator, FluxProfile,
};
use nearfield_core::greens::{greens_multipole_auto, greens_point, GreensQuery};
use nearfield_core::special::gauss_legendre_sphere;
use nearfield_core::{ChannelSet, DoubleDouble, PartialWaveAmplitude, UnitVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::error::{CliError, Result};

/// Residue allowed between the exact flux and its asymptotic series where
/// the series is complete.
pub const TWO_PATH_TOLERANCE: f64 = 1e-10;

/// Highest `l` for which the order-4 series of every mode pair is complete.
const COMPLETE_SERIES_L_MAX: u32 = 2;

const GREENS_BATTERY: usize = 50;

fn csv_block<I, R>(header: &[String], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

// ---------------------------------------------------------------- flux

#[derive(Serialize)]
struct FluxReport<'a> {
    channels: Vec<&'a str>,
    relative_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    asymptotic_order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    asymptotic_gap: Option<Vec<f64>>,
    profile: FluxProfile,
}

/// Degree of the angular grid, raised to `2 L_max` when the configured
/// degree cannot integrate the flux exactly.
pub fn grid_degree(config: &RunConfig, l_max: u32) -> u32 {
    match config.grid_degree {
        None => default_grid_order(l_max),
        Some(d) if d < 2 * l_max => {
            eprintln!(
                "warning: grid_degree {d} is below 2 L_max = {}, raised",
                2 * l_max
            );
            2 * l_max
        }
        Some(d) => d,
    }
}

/// Largest pointwise `|exact - asymptotic|` at each distance, relative to
/// the peak of the exact flux there.
fn asymptotic_gaps(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    profile: &FluxProfile,
    order: u32,
) -> Result<Vec<f64>> {
    let eval = FluxEvaluator::<DoubleDouble>::new(f, channels)?;
    let nodes: Vec<UnitVector<DoubleDouble>> =
        profile.nodes.iter().map(UnitVector::from_f64).collect();
    let mut gaps = Vec::with_capacity(profile.samples.len());
    for s in &profile.samples {
        let peak = s.differential.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for (node, exact) in nodes.iter().zip(&s.differential) {
            let asym = eval.differential_asymptotic(s.r, node, order)?.to_f64();
            worst = worst.max((asym - exact).abs());
        }
        gaps.push(if peak == 0.0 { worst } else { worst / peak });
    }
    Ok(gaps)
}

pub fn cmd_flux(config: &RunConfig, format: OutputFormat) -> Result<String> {
    let loaded = config.load_amplitude()?;
    let (channels, f) = (&loaded.channels, &loaded.amplitude);
    f.validate(channels)?;
    let degree = grid_degree(config, f.l_max().unwrap_or(0));
    let r = config.distances(channels)?;
    let profile = flux_profile(f, channels, &r, Some(degree))?;
    let defect = profile.conservation_defect();
    let gaps = match config.asymptotic_order {
        Some(order) => Some(asymptotic_gaps(f, channels, &profile, order)?),
        None => None,
    };
    let labels: Vec<&str> = channels
        .channels()
        .iter()
        .map(|c| c.label.as_str())
        .collect();
    let sigma = profile.cross_section_sum;

    match format {
        OutputFormat::Json => {
            let mut profile = profile;
            if !config.per_angle {
                profile.nodes.clear();
                profile.weights.clear();
                for s in &mut profile.samples {
                    s.differential.clear();
                }
            }
            Ok(to_json(&FluxReport {
                channels: labels,
                relative_defect: defect,
                asymptotic_order: config.asymptotic_order,
                asymptotic_gap: gaps,
                profile,
            }))
        }
        OutputFormat::Csv => {
            let mut header = vec!["r".to_string()];
            header.extend(labels.iter().map(|l| format!("kr_{l}")));
            header.extend(
                [
                    "total",
                    "cross_section_sum",
                    "relative_defect",
                    "min_differential",
                    "max_differential",
                    "near_field",
                ]
                .map(String::from),
            );
            if let Some(order) = config.asymptotic_order {
                header.push(format!("asymptotic_gap_order_{order}"));
            }
            let rows = profile.samples.iter().enumerate().map(|(i, s)| {
                let mut row = vec![num(s.r)];
                row.extend(s.kr.iter().map(|&x| num(x)));
                let rel = if sigma == 0.0 {
                    (s.total - sigma).abs()
                } else {
                    (s.total - sigma).abs() / sigma
                };
                row.extend([
                    num(s.total),
                    num(sigma),
                    num(rel),
                    num(s.min_differential),
                    num(s.max_differential),
                    s.near_field.to_string(),
                ]);
                if let Some(g) = &gaps {
                    row.push(num(g[i]));
                }
                row
            });
            let mut out = csv_block(&header, rows)?;
            if config.per_angle {
                let header = ["r", "theta", "phi", "weight", "differential"].map(String::from);
                for s in &profile.samples {
                    let rows = profile
                        .nodes
                        .iter()
                        .zip(&profile.weights)
                        .zip(&s.differential)
                        .map(|((n, w), d)| {
                            vec![num(s.r), num(n.theta()), num(n.phi()), num(*w), num(*d)]
                        });
                    out.push('\n');
                    out.push_str(&csv_block(&header, rows)?);
                }
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------- coeffs

#[derive(Serialize)]
struct CoefficientRow {
    n: usize,
    numerator: String,
    denominator: String,
}

#[derive(Serialize)]
struct CoefficientReport {
    l: u32,
    j: u32,
    delta: i64,
    upsilon: i64,
    coefficients: Vec<CoefficientRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

const DELTA_ZERO_NOTE: &str = "Δ=0: the pair carries no distance dependence";

/// Exact `A_n(l, j)` for one mode pair.
pub fn cmd_coeffs(l: u32, j: u32, format: OutputFormat) -> Result<String> {
    let series = wronskian_series(j, l);
    let rows: Vec<CoefficientRow> = series
        .correction()
        .iter()
        .enumerate()
        .map(|(n, a)| CoefficientRow {
            n,
            numerator: a.numer().to_string(),
            denominator: a.denom().to_string(),
        })
        .collect();
    let note = (series.delta() == 0).then(|| DELTA_ZERO_NOTE.to_string());
    match format {
        OutputFormat::Json => Ok(to_json(&CoefficientReport {
            l,
            j,
            delta: series.delta(),
            upsilon: series.upsilon(),
            coefficients: rows,
            note,
        })),
        OutputFormat::Csv => {
            if let Some(note) = &note {
                eprintln!("{note}");
            }
            let header = ["n", "numerator", "denominator"].map(String::from);
            csv_block(
                &header,
                rows.into_iter()
                    .map(|r| [r.n.to_string(), r.numerator, r.denominator]),
            )
        }
    }
}

/// `A_n(l, j)` for `j = 0..=l`: one row per `n`, one column per `j`. Cells
/// past `n = l + j` are blank and the `j = l` column is empty.
pub fn cmd_coeff_table(l: u32, format: OutputFormat) -> Result<String> {
    let columns: Vec<_> = (0..=l).map(|j| wronskian_series(j, l)).collect();
    let n_max = columns
        .iter()
        .map(|s| s.correction().len())
        .max()
        .unwrap_or(0);
    match format {
        OutputFormat::Json => {
            let tables: Vec<CoefficientReport> = columns
                .iter()
                .map(|s| CoefficientReport {
                    l,
                    j: s.j(),
                    delta: s.delta(),
                    upsilon: s.upsilon(),
                    coefficients: s
                        .correction()
                        .iter()
                        .enumerate()
                        .map(|(n, a)| CoefficientRow {
                            n,
                            numerator: a.numer().to_string(),
                            denominator: a.denom().to_string(),
                        })
                        .collect(),
                    note: (s.delta() == 0).then(|| DELTA_ZERO_NOTE.to_string()),
                })
                .collect();
            Ok(to_json(&tables))
        }
        OutputFormat::Csv => {
            let mut header = vec!["n".to_string()];
            header.extend((0..=l).map(|j| format!("j={j}")));
            let rows = (0..n_max).map(|n| {
                let mut row = vec![n.to_string()];
                row.extend(columns.iter().map(|s| {
                    s.correction()
                        .get(n)
                        .map(|a| a.to_string())
                        .unwrap_or_default()
                }));
                row
            });
            csv_block(&header, rows)
        }
    }
}

// ---------------------------------------------------------------- check

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckKind {
    Greens,
    Unitarity,
    Optical,
    Conservation,
    TwoPath,
    All,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(check: &str, defect: f64, tolerance: f64, detail: String) -> Self {
        Self {
            check: check.to_string(),
            defect,
            tolerance,
            pass: defect <= tolerance,
            detail,
        }
    }
}

/// Multipole sum with the automatic cutoff against the closed form on a
/// seeded battery of queries with `r/R <= 1/2` and `kR` in `[2, 100]`.
fn check_greens(config: &RunConfig) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst: f64 = 0.0;
    for _ in 0..GREENS_BATTERY {
        let k: f64 = rng.random_range(0.5..=2.0);
        let big_r = rng.random_range(2.0..=100.0) / k;
        let ratio: f64 = rng.random_range(0.0..=0.5);
        let n = direction(&mut rng).as_array();
        let s = direction(&mut rng).as_array();
        let q = GreensQuery::outgoing(k, n.map(|c| c * big_r), s.map(|c| c * big_r * ratio))?;
        let exact = greens_point(&q)?;
        worst = worst.max((greens_multipole_auto(&q)? - exact).norm() / exact.norm());
    }
    Ok(CheckResult::new(
        "greens",
        worst,
        config.tolerances.greens,
        format!("{GREENS_BATTERY} queries, automatic cutoff"),
    ))
}

fn direction<R: Rng>(rng: &mut R) -> UnitVector {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    UnitVector::from_angles(z.acos(), phi)
}

fn check_unitarity(config: &RunConfig) -> Result<CheckResult> {
    let loaded = config.load_amplitude()?;
    let family = loaded.family.ok_or_else(|| {
        CliError::Data(format!(
            "{}",
            nearfield_core::Error::MissingReciprocal(loaded.channels.entrance())
        ))
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let incident: Vec<UnitVector> = std::iter::once(UnitVector::z_axis())
        .chain((0..2).map(|_| direction(&mut rng)))
        .collect();
    let outgoing: Vec<UnitVector> = (0..4).map(|_| direction(&mut rng)).collect();
    let defect = unitarity_defect(&family, &loaded.channels, &incident, &outgoing)?;
    Ok(CheckResult::new(
        "unitarity",
        defect,
        config.tolerances.unitarity,
        format!(
            "{} channels, {} x {} directions",
            loaded.channels.len(),
            incident.len(),
            outgoing.len()
        ),
    ))
}

fn check_optical(config: &RunConfig) -> Result<Vec<CheckResult>> {
    let loaded = config.load_amplitude()?;
    let (channels, f) = (&loaded.channels, &loaded.amplitude);
    let tol = config.tolerances.unitarity;
    let mut out = vec![CheckResult::new(
        "optical",
        optical_theorem_defect(f, channels)?,
        tol,
        "cross sections".into(),
    )];
    let grid = gauss_legendre_sphere::<DoubleDouble>(grid_degree(config, f.l_max().unwrap_or(0)))?;
    let mut worst: f64 = 0.0;
    let r = config.distances(channels)?;
    for &x in &r {
        worst = worst.max(optical_theorem_defect_at(f, channels, x, &grid)?);
    }
    out.push(CheckResult::new(
        "optical-finite-r",
        worst,
        tol,
        format!("flux through {} spheres", r.len()),
    ));
    Ok(out)
}

fn check_conservation(config: &RunConfig) -> Result<CheckResult> {
    let loaded = config.load_amplitude()?;
    let (channels, f) = (&loaded.channels, &loaded.amplitude);
    f.validate(channels)?;
    let r = config.distances(channels)?;
    let profile = flux_profile(
        f,
        channels,
        &r,
        Some(grid_degree(config, f.l_max().unwrap_or(0))),
    )?;
    Ok(CheckResult::new(
        "conservation",
        profile.conservation_defect(),
        config.tolerances.conservation,
        format!(
            "{} distances, sum sigma = {:e}",
            r.len(),
            profile.cross_section_sum
        ),
    ))
}

/// Exact flux against the order-4 series on the modes `l <= 2`, where the
/// series is complete, plus the printed-coefficient diagnostic.
fn check_two_path(config: &RunConfig) -> Result<Vec<CheckResult>> {
    let loaded = config.load_amplitude()?;
    let (channels, f) = (&loaded.channels, &loaded.amplitude);
    f.validate(channels)?;
    let mut low = PartialWaveAmplitude::with_incident(*f.incident());
    for (key, value) in f.iter().filter(|(key, _)| key.l <= COMPLETE_SERIES_L_MAX) {
        low.insert(key.beta, key.l, key.m, value)?;
    }
    let eval = FluxEvaluator::<DoubleDouble>::new(&low, channels)?;
    let grid = gauss_legendre_sphere::<DoubleDouble>(grid_degree(config, COMPLETE_SERIES_L_MAX))?;
    let mut worst: f64 = 0.0;
    for &r in &config.distances(channels)? {
        let exact = eval.differential_exact_grid(r, &grid)?;
        let peak = exact.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
        if peak == 0.0 {
            continue;
        }
        for (node, a) in grid.nodes().iter().zip(&exact) {
            let b = eval.differential_asymptotic(r, node, nearfield_core::flux::MAX_ORDER)?;
            worst = worst.max((*a - b).to_f64().abs() / peak);
        }
    }
    let diag = printed_series_diagnostic(8);
    let off = diag.iter().filter(|c| !c.agrees()).count();
    Ok(vec![
        CheckResult::new(
            "two-path",
            worst,
            TWO_PATH_TOLERANCE,
            format!(
                "modes l <= {COMPLETE_SERIES_L_MAX}, order {}",
                nearfield_core::flux::MAX_ORDER
            ),
        ),
        CheckResult::new(
            "printed-series",
            off as f64,
            0.0,
            format!(
                "{off} of {} printed pair coefficients differ from the Wronskian",
                diag.len()
            ),
        ),
    ])
}

/// Runs the selected checks. The boolean is true when every check passed.
pub fn cmd_check(
    which: CheckKind,
    config: &RunConfig,
    format: OutputFormat,
) -> Result<(String, bool)> {
    let mut results = Vec::new();
    let all = which == CheckKind::All;
    if all || which == CheckKind::Greens {
        results.push(check_greens(config)?);
    }
    if all || which == CheckKind::Unitarity {
        results.push(check_unitarity(config)?);
    }
    if all || which == CheckKind::Optical {
        results.extend(check_optical(config)?);
    }
    if all || which == CheckKind::Conservation {
        results.push(check_conservation(config)?);
    }
    if all || which == CheckKind::TwoPath {
        results.extend(check_two_path(config)?);
    }
    let pass = results.iter().all(|r| r.pass);
    let text = match format {
        OutputFormat::Json => to_json(&results),
        OutputFormat::Csv => {
            let header = ["check", "defect", "tolerance", "status", "detail"].map(String::from);
            csv_block(
                &header,
                results.iter().map(|r| {
                    [
                        r.check.clone(),
                        num(r.defect),
                        num(r.tolerance),
                        if r.pass { "PASS" } else { "FAIL" }.to_string(),
                        r.detail.clone(),
                    ]
                }),
            )?
        }
    };
    Ok((text, pass))
}
