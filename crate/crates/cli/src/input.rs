use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use serde::Deserialize;

use specpair::constructor::ContinuousPair;
use specpair::domains::{BoxDomain, RationalBox, Spectrum};
use specpair::finite::FiniteSet;
use specpair::rational::{int, parse_rational, Rational};
use specpair::{PairKind, Tolerances};

/// Flags describing a finite pair and, for continuous commands, a base pair.
#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// Modulus of Z_N^d.
    #[arg(long = "N")]
    pub modulus: Option<u64>,
    /// Points of A: comma-separated integers, or `;`-separated vectors such as "0,0;2,0".
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Points of J, same syntax as --A.
    #[arg(long = "J", allow_hyphen_values = true)]
    pub j: Option<String>,
    /// JSON pair description: {"N": .., "A": [[..]], "J": [[..]], "base": {..}, "kind": ".."}.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// JSON file holding the base continuous pair.
    #[arg(long)]
    pub base: Option<PathBuf>,
    /// Base pair ([0,L)^d, (1/L)Z^d) for a rational L; defaults to L = 1.
    #[arg(long = "base-scale")]
    pub base_scale: Option<String>,
    /// Override of the unitarity and orthogonality tolerances, in (0, 1e-3).
    #[arg(long = "tol")]
    pub tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairFile {
    #[serde(rename = "N")]
    modulus: u64,
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    #[serde(rename = "J")]
    j: Vec<Vec<i64>>,
    #[serde(default)]
    base: Option<ContinuousPair>,
    #[serde(default)]
    kind: Option<PairKind>,
}

pub struct ResolvedPair {
    pub a: FiniteSet,
    pub j: FiniteSet,
    pub base: ContinuousPair,
    pub kind: Option<PairKind>,
    pub tol: Tolerances,
}

impl ResolvedPair {
    pub fn modulus(&self) -> u64 {
        self.a.modulus()
    }
}

/// Parses "0,2" as two one-dimensional points and "0,0;2,0" as two planar points.
pub fn parse_points(text: &str) -> Result<Vec<Vec<i64>>> {
    let points: Vec<Vec<i64>> = text
        .split(';')
        .map(|chunk| {
            chunk
                .split(',')
                .map(|x| x.trim().parse::<i64>().with_context(|| format!("invalid integer {x:?} in {text:?}")))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<_>>()?;
    if text.contains(';') {
        let d = points[0].len();
        if points.iter().any(|p| p.len() != d) {
            bail!("points in {text:?} have different dimensions");
        }
        Ok(points)
    } else {
        Ok(points[0].iter().map(|&x| vec![x]).collect())
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        anyhow!(
            "malformed JSON in {} at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        )
    })
}

fn validate_base(p: ContinuousPair) -> Result<ContinuousPair> {
    Ok(ContinuousPair::new(p.domain, p.spectrum, p.kind, p.lower, p.upper)?)
}

/// `([0,L)^d, (1/L)Z^d)`.
pub fn scaled_base(dimension: usize, scale: Rational) -> Result<ContinuousPair> {
    if scale <= int(0) {
        bail!("base scale must be positive");
    }
    let cube = RationalBox::new(vec![int(0); dimension], vec![scale; dimension])?;
    let spectrum = Spectrum::scaled_lattice(dimension, scale.recip());
    Ok(ContinuousPair::orthogonal(BoxDomain::from_box(cube), spectrum)?)
}

pub fn resolve(args: &PairArgs) -> Result<ResolvedPair> {
    let tol = match args.tol {
        Some(t) => Tolerances::with_override(t)?,
        None => Tolerances::default(),
    };
    let (modulus, a_pts, j_pts, file_base, kind) = match &args.input {
        Some(path) => {
            if args.a.is_some() || args.j.is_some() || args.modulus.is_some() {
                bail!("--input cannot be combined with --N, --A or --J");
            }
            let f: PairFile = read_json(path)?;
            (f.modulus, f.a, f.j, f.base, f.kind)
        }
        None => {
            let modulus = args.modulus.ok_or_else(|| anyhow!("--N is required"))?;
            let a = parse_points(args.a.as_deref().ok_or_else(|| anyhow!("--A is required"))?)?;
            let j = parse_points(args.j.as_deref().ok_or_else(|| anyhow!("--J is required"))?)?;
            (modulus, a, j, None, None)
        }
    };
    let d = a_pts.first().map_or(1, |p| p.len());
    let a = FiniteSet::new(modulus, d, a_pts).context("invalid set A")?;
    let j = FiniteSet::new(modulus, j_pts.first().map_or(d, |p| p.len()), j_pts).context("invalid set J")?;

    let base = match (&args.base, &args.base_scale, file_base) {
        (Some(_), Some(_), _) => bail!("--base and --base-scale are mutually exclusive"),
        (Some(path), None, _) => validate_base(read_json(path)?)?,
        (None, Some(s), _) => scaled_base(d, parse_rational(s)?)?,
        (None, None, Some(b)) => validate_base(b)?,
        (None, None, None) => ContinuousPair::unit_cube(d),
    };
    Ok(ResolvedPair { a, j, base, kind, tol })
}
