//! CSV data for plotting the example domains, spectra and sampling points.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};

use specpair::constructor::{cartesian_product, combine_orthogonal, combine_riesz, ContinuousPair};
use specpair::domains::{BoxDomain, Spectrum};
use specpair::finite::FiniteSet;
use specpair::rational::{format_rational, to_f64};
use specpair::sampling::SamplePattern;

use crate::output::{num, write_csv};

const FIGURE_INDEX: i64 = 5;

fn line(n: u64, v: &[i64]) -> FiniteSet {
    FiniteSet::line(n, v).expect("valid set")
}

fn one_dimensional_pair() -> ContinuousPair {
    combine_orthogonal(&ContinuousPair::unit_cube(1), &line(4, &[0, 2]), &line(4, &[0, 1]))
        .pair
        .expect("orthogonal example")
}

fn box_rows(domain: &BoxDomain) -> (Vec<String>, Vec<Vec<String>>) {
    let d = domain.dimension();
    let mut header = vec!["box".to_string()];
    for k in 0..d {
        header.push(format!("lo{k}"));
        header.push(format!("hi{k}"));
    }
    let rows = domain
        .boxes()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut row = vec![i.to_string()];
            for k in 0..d {
                row.push(num(to_f64(&b.lo()[k])));
                row.push(num(to_f64(&b.hi()[k])));
            }
            row
        })
        .collect();
    (header, rows)
}

fn point_rows(spectrum: &Spectrum, n_max: i64) -> (Vec<String>, Vec<Vec<String>>) {
    let d = spectrum.dimension();
    let mut header: Vec<String> = (0..d).map(|k| format!("x{k}")).collect();
    header.extend((0..d).map(|k| format!("exact{k}")));
    header.push("shift".into());
    let rows = spectrum
        .enumerate_by_index(n_max)
        .into_iter()
        .map(|p| {
            let mut row: Vec<String> = p.point.iter().map(|x| num(to_f64(x))).collect();
            row.extend(p.point.iter().map(format_rational));
            row.push(p.shift_index.to_string());
            row
        })
        .collect();
    (header, rows)
}

fn emit(dir: &Path, name: &str, (header, rows): (Vec<String>, Vec<Vec<String>>)) -> Result<PathBuf> {
    let path = dir.join(name);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(&path, &header, &rows)?;
    Ok(path)
}

/// Writes the CSV files of one figure into `dir` and returns their paths.
pub fn write_figure(name: &str, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let written = match name {
        "fig1" => {
            let a = FiniteSet::new(4, 2, vec![vec![0, 0], vec![2, 0]])?;
            let j = FiniteSet::new(4, 2, vec![vec![0, 0], vec![1, 0]])?;
            let pair = combine_riesz(&ContinuousPair::unit_cube(2), &a, &j)
                .pair
                .expect("planar example");
            vec![
                emit(dir, "fig1_boxes.csv", box_rows(&pair.domain))?,
                emit(dir, "fig1_points.csv", point_rows(&pair.spectrum, 2))?,
            ]
        }
        "fig2" => {
            let pair = one_dimensional_pair();
            vec![
                emit(dir, "fig2_intervals.csv", box_rows(&pair.domain))?,
                emit(dir, "fig2_points.csv", point_rows(&pair.spectrum, FIGURE_INDEX))?,
            ]
        }
        "fig3" => {
            let p = one_dimensional_pair();
            let square = cartesian_product(&p, &p)?;
            vec![
                emit(dir, "fig3_boxes.csv", box_rows(&square.domain))?,
                emit(dir, "fig3_points.csv", point_rows(&square.spectrum, 2))?,
            ]
        }
        "fig4" => {
            let pattern = SamplePattern::from_finite(&line(4, &[0, 1]), FIGURE_INDEX as u32)?;
            let rows = pattern
                .points()
                .iter()
                .map(|x| vec![num(to_f64(x)), format_rational(x)])
                .collect();
            vec![emit(dir, "fig4_points.csv", (vec!["x".into(), "exact".into()], rows))?]
        }
        other => bail!("unknown figure {other:?}; expected fig1, fig2, fig3 or fig4"),
    };
    Ok(written)
}
