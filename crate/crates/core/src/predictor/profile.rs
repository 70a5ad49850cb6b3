//! Noise profiles: `beta_ell(x, N)` over a grid of widths and prefix sizes.
//!
//! The lower and upper noises are a liminf and a limsup in `N`; from a finite
//! prefix we report the minimum and maximum over the tail of the grid and
//! keep the whole curve so convergence can be judged by eye.

use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{usable_len, ContextTable, Orientation};
use crate::digitseq::DigitSeq;
use crate::error::{domain, Error, Result};

pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;
/// Smallest point of the default grid.
pub const DEFAULT_GRID_START: usize = 1 << 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOptions {
    pub ell_max: usize,
    /// Ascending scored-position counts; `None` selects [`default_grid`].
    pub grid: Option<Vec<usize>>,
    pub orientation: Orientation,
    pub tail_fraction: f64,
    /// Worker threads for chunked counting; the result does not depend on it.
    pub threads: usize,
}

impl ProfileOptions {
    pub fn new(ell_max: usize, orientation: Orientation) -> Self {
        Self {
            ell_max,
            grid: None,
            orientation,
            tail_fraction: DEFAULT_TAIL_FRACTION,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub ell: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub mismatches: u64,
    pub scored: u64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllEstimate {
    pub ell: usize,
    pub loe: f64,
    pub upe: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseProfile {
    pub schema_version: u32,
    pub base: u32,
    pub orientation: Orientation,
    pub ell_max: usize,
    pub grid: Vec<usize>,
    pub tail_fraction: f64,
    /// Grid points inside the tail window.
    pub tail_points: usize,
    /// Sorted by `(ell, N)`.
    pub entries: Vec<ProfileEntry>,
    pub estimates: Vec<EllEstimate>,
    /// Estimates at `ell_max`.
    pub loe: f64,
    pub upe: f64,
    /// Free-form description of where the digits came from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<serde_json::Value>,
}

/// Powers of two from 2^10 below `usable`, then `usable` itself.
pub fn default_grid(usable: usize) -> Vec<usize> {
    let mut grid = Vec::new();
    let mut n = DEFAULT_GRID_START;
    while n < usable {
        grid.push(n);
        n *= 2;
    }
    if usable > 0 {
        grid.push(usable);
    }
    grid
}

fn tail_points(grid_len: usize, fraction: f64) -> usize {
    ((grid_len as f64 * fraction).ceil() as usize).clamp(1, grid_len)
}

/// Splits `[0, grid.last())` at every grid point and further into pieces of
/// at most `piece` positions.
fn chunk_bounds(grid: &[usize], piece: usize) -> Vec<usize> {
    let mut bounds = vec![0];
    for &g in grid {
        let mut at = *bounds.last().unwrap();
        while g - at > piece {
            at += piece;
            bounds.push(at);
        }
        if g > at {
            bounds.push(g);
        }
    }
    bounds
}

fn width_curve(
    x: &DigitSeq,
    ell: usize,
    grid: &[usize],
    orientation: Orientation,
    threads: usize,
) -> Vec<ProfileEntry> {
    let n_max = *grid.last().expect("grid is non-empty");
    let piece = if threads <= 1 {
        usize::MAX
    } else {
        n_max.div_ceil(threads * 4).max(1 << 16)
    };
    let bounds = chunk_bounds(grid, piece);
    let offset = orientation.scored_positions(ell, 0).start;
    let tables: Vec<ContextTable> = bounds
        .par_windows(2)
        .map(|w| {
            let mut t = ContextTable::new(x.base(), ell);
            t.count(x.digits(), orientation, offset + w[0]..offset + w[1]);
            t
        })
        .collect();

    let mut acc = ContextTable::new(x.base(), ell);
    let mut out = Vec::with_capacity(grid.len());
    let mut next = grid.iter().peekable();
    for (t, w) in tables.iter().zip(bounds.windows(2)) {
        acc.merge(t);
        while let Some(&&g) = next.peek() {
            if g > w[1] {
                break;
            }
            let beta = acc.beta();
            out.push(ProfileEntry {
                ell,
                n: g,
                mismatches: beta.mismatches,
                scored: beta.scored,
                beta: beta.value(),
            });
            next.next();
        }
    }
    out
}

/// `beta_ell(x, N)` for every `ell` in `1..=ell_max` and `N` in the grid.
pub fn noise_profile(x: &DigitSeq, opts: &ProfileOptions) -> Result<NoiseProfile> {
    if opts.ell_max == 0 {
        return Err(domain("ell_max must be at least 1"));
    }
    if !(opts.tail_fraction > 0.0 && opts.tail_fraction <= 1.0) {
        return Err(domain(format!(
            "tail fraction must lie in (0, 1], got {}",
            opts.tail_fraction
        )));
    }
    let usable = usable_len(x.len(), opts.ell_max);
    let grid = match &opts.grid {
        Some(g) => g.clone(),
        None => default_grid(usable),
    };
    if grid.is_empty() {
        return Err(domain("N grid is empty"));
    }
    if grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("N grid must be strictly ascending and positive"));
    }
    if *grid.last().unwrap() > usable {
        return Err(domain(format!(
            "largest grid point {} exceeds the {usable} positions usable at width {}",
            grid.last().unwrap(),
            opts.ell_max
        )));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let curves: Vec<Vec<ProfileEntry>> = pool.install(|| {
        (1..=opts.ell_max)
            .into_par_iter()
            .map(|ell| width_curve(x, ell, &grid, opts.orientation, opts.threads))
            .collect()
    });

    let tail = tail_points(grid.len(), opts.tail_fraction);
    let estimates: Vec<EllEstimate> = curves
        .iter()
        .enumerate()
        .map(|(i, curve)| {
            let window = &curve[curve.len() - tail..];
            EllEstimate {
                ell: i + 1,
                loe: window.iter().map(|e| e.beta).fold(f64::INFINITY, f64::min),
                upe: window.iter().map(|e| e.beta).fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();
    let last = *estimates.last().unwrap();
    Ok(NoiseProfile {
        schema_version: crate::SCHEMA_VERSION,
        base: x.base(),
        orientation: opts.orientation,
        ell_max: opts.ell_max,
        grid,
        tail_fraction: opts.tail_fraction,
        tail_points: tail,
        entries: curves.into_iter().flatten().collect(),
        estimates,
        loe: last.loe,
        upe: last.upe,
        source: None,
    })
}

impl NoiseProfile {
    /// Entries of one width, ascending in `N`.
    pub fn curve(&self, ell: usize) -> impl Iterator<Item = &ProfileEntry> {
        self.entries.iter().filter(move |e| e.ell == ell)
    }

    /// Entries of one width that fall inside the tail window.
    pub fn tail(&self, ell: usize) -> impl Iterator<Item = &ProfileEntry> {
        let skip = self.grid.len() - self.tail_points;
        self.curve(ell).skip(skip)
    }

    pub fn estimate(&self, ell: usize) -> Option<&EllEstimate> {
        self.estimates.iter().find(|e| e.ell == ell)
    }

    /// `ell,N,mismatches,scored,beta` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("ell,N,mismatches,scored,beta\n");
        for e in &self.entries {
            writeln!(out, "{},{},{},{},{:.10}", e.ell, e.n, e.mismatches, e.scored, e.beta)
                .expect("writing to a String");
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Where a profile falls relative to the two extremes of the noise scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Classification {
    /// Lower noise at the maximum `(b-1)/b`: behaves like a normal sequence.
    NormalLike,
    /// Upper noise at 0: behaves like a normality-preserving sequence.
    PreservingLike,
    Intermediate {
        low: f64,
        high: f64,
    },
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::NormalLike => f.write_str("NormalLike"),
            Classification::PreservingLike => f.write_str("PreservingLike"),
            Classification::Intermediate { low, high } => {
                write!(f, "Intermediate [{low:.4}, {high:.4}]")
            }
        }
    }
}

pub fn classify(profile: &NoiseProfile, tol: f64) -> Classification {
    let b = f64::from(profile.base);
    if profile.loe >= (b - 1.0) / b - tol {
        Classification::NormalLike
    } else if profile.upe <= tol {
        Classification::PreservingLike
    } else {
        Classification::Intermediate {
            low: profile.loe,
            high: profile.upe,
        }
    }
}
