//! Numerical cross-check on the robot-arm torus.
//!
//! The open arm with fixed legs `l_1..l_{n-1}` has shape space `T^{n-2}`
//! (the first bar is pinned to the x-axis). `M_A` is the band where the
//! squared end-to-end distance lies in `[lo^2, hi^2]`. The band is sampled on
//! a `G^{n-2}` grid of cell centers; components come from union-find over
//! face-adjacent cells and, on the 2-torus, the Euler characteristic from the
//! closed-square complex.
//!
//! A cell counts as *ambiguous* when an endpoint level set may pass through
//! it while a critical point may hide inside: the gradient of `f` cannot be
//! bounded away from zero on the cell and the range of `f` over the cell
//! contains a critical value `-c^2`. It is also ambiguous when that range
//! may cover the whole band (the band is thinner than the cell).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{check_generic, critical_lengths, LengthVector, TelescopicData};

pub const MIN_RESOLUTION: usize = 8;
/// Largest grid `build_band` will allocate.
pub const MAX_CELLS: usize = 1 << 27;

/// `f = -|l_1 (1,0) + sum_{i>=2} l_i (cos t_i, sin t_i)|^2`.
pub fn eval_f(angles: &[f64], fixed: &LengthVector) -> Result<f64> {
    if angles.len() + 1 != fixed.len() {
        return Err(Error::SizeMismatch {
            expected: fixed.len() - 1,
            found: angles.len(),
        });
    }
    Ok(endpoint_f(angles, &fixed.to_f64()))
}

fn endpoint(angles: &[f64], lengths: &[f64]) -> (f64, f64) {
    let mut x = lengths[0];
    let mut y = 0.0;
    for (l, t) in lengths[1..].iter().zip(angles) {
        let (s, c) = t.sin_cos();
        x += l * c;
        y += l * s;
    }
    (x, y)
}

fn endpoint_f(angles: &[f64], lengths: &[f64]) -> f64 {
    let (x, y) = endpoint(angles, lengths);
    -(x * x + y * y)
}

/// Default grid resolution per leg count.
pub fn default_resolution(n: usize) -> usize {
    match n {
        3 => 256,
        4 => 1024,
        _ => 128,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridBand {
    pub n: usize,
    pub resolution: usize,
    /// Band endpoints `a = -hi^2 <= f <= b = -lo^2`.
    pub a: f64,
    pub b: f64,
    #[serde(skip)]
    pub marked: Vec<bool>,
    pub marked_cells: usize,
    pub ambiguous: usize,
    /// Cells within the global Lipschitz margin of either endpoint.
    pub margin_cells: usize,
    /// Global Lipschitz margin `2 (sum l)^2 * (2 pi / G) * sqrt(n - 2)`.
    pub margin: f64,
}

impl GridBand {
    pub fn dim(&self) -> usize {
        self.n - 2
    }

    pub fn cell_count(&self) -> usize {
        self.marked.len()
    }

    pub fn is_marked(&self, index: usize) -> bool {
        self.marked[index]
    }

    fn coords(&self, mut index: usize) -> Vec<usize> {
        let g = self.resolution;
        (0..self.dim())
            .map(|_| {
                let c = index % g;
                index /= g;
                c
            })
            .collect()
    }

    fn index(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.resolution + c)
    }

    fn shifted(&self, index: usize, axis: usize, delta: isize) -> usize {
        let g = self.resolution;
        let stride = g.pow(axis as u32);
        let c = (index / stride) % g;
        let moved = (c as isize + delta).rem_euclid(g as isize) as usize;
        index - c * stride + moved * stride
    }
}

/// Samples `f` at every cell center and marks the band.
pub fn build_band(a: &TelescopicData, resolution: usize) -> Result<GridBand> {
    check_generic(a)?;
    if resolution < MIN_RESOLUTION {
        return Err(Error::Contract(format!(
            "grid resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let n = a.n();
    let dim = n - 2;
    let cells = u32::try_from(dim)
        .ok()
        .and_then(|d| resolution.checked_pow(d))
        .filter(|&c| c <= MAX_CELLS)
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "a {resolution}^{dim} grid exceeds {MAX_CELLS} cells"
            ))
        })?;

    let lengths = a.fixed().to_f64();
    let (lo, hi) = (a.lo().to_f64(), a.hi().to_f64());
    let (band_a, band_b) = (-hi * hi, -lo * lo);
    let step = std::f64::consts::TAU / resolution as f64;
    let total: f64 = lengths.iter().sum();
    let margin = 2.0 * total * total * step * (dim as f64).sqrt();
    // half-diagonal of a cell in angle space
    let rho = 0.5 * step * (dim as f64).sqrt();
    // critical values of f; 0 is the maximum when the arm can close
    let mut critical: Vec<f64> = critical_lengths(a.fixed())?
        .iter()
        .map(|c| -c.to_f64().powi(2))
        .collect();
    critical.push(0.0);
    let moving = &lengths[1..];
    let sum_sq: f64 = moving.iter().map(|l| l * l).sum();

    let samples: Vec<(bool, bool, bool)> = (0..cells)
        .into_par_iter()
        .map_init(
            || vec![0.0; dim],
            |angles, index| {
                let mut rest = index;
                for t in angles.iter_mut() {
                    *t = ((rest % resolution) as f64 + 0.5) * step;
                    rest /= resolution;
                }
                let (x, y) = endpoint(angles, &lengths);
                let value = -(x * x + y * y);
                let marked = band_a <= value && value <= band_b;
                let near = (value - band_a).abs().min((value - band_b).abs());
                let in_margin = near <= margin;

                let (grad, hessian) = derivative_norms(angles, moving, x, y);
                // sup of the Hessian norm over the cell
                let reach = (x * x + y * y).sqrt() + rho * sum_sq.sqrt();
                let third = (8.0 * sum_sq * sum_sq
                    + 4.0 * sum_sq * (sum_sq.sqrt() + reach).powi(2))
                .sqrt();
                let hessian = hessian + third * rho;
                // f varies by at most this much over the cell
                let spread = grad * rho + 0.5 * hessian * rho * rho;
                let wall = near <= spread;
                let straddles = value - spread < band_a && value + spread > band_b;
                let hides = grad <= hessian * rho
                    && critical.iter().any(|c| (value - c).abs() <= spread);
                let ambiguous = (wall && hides) || straddles;
                (marked, ambiguous, in_margin)
            },
        )
        .collect();

    let marked: Vec<bool> = samples.iter().map(|s| s.0).collect();
    Ok(GridBand {
        n,
        resolution,
        a: band_a,
        b: band_b,
        marked_cells: marked.iter().filter(|&&m| m).count(),
        ambiguous: samples.iter().filter(|s| s.1).count(),
        margin_cells: samples.iter().filter(|s| s.2).count(),
        marked,
        margin,
    })
}

/// Euclidean norm of the gradient of `f` and Frobenius norm of its Hessian at
/// `angles`, given the endpoint `(x, y)`.
fn derivative_norms(angles: &[f64], moving: &[f64], x: f64, y: f64) -> (f64, f64) {
    let mut grad_sq = 0.0;
    let mut hess_sq = 0.0;
    for (i, (li, ti)) in moving.iter().zip(angles).enumerate() {
        let (si, ci) = ti.sin_cos();
        let g = 2.0 * li * (x * si - y * ci);
        grad_sq += g * g;
        let diag = 2.0 * li * (x * ci + y * si) - 2.0 * li * li;
        hess_sq += diag * diag;
        for (lj, tj) in moving[i + 1..].iter().zip(&angles[i + 1..]) {
            let off = 2.0 * li * lj * (ti - tj).cos();
            hess_sq += 2.0 * off * off;
        }
    }
    (grad_sq.sqrt(), hess_sq.sqrt())
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(size: usize) -> Self {
        DisjointSets {
            parent: (0..size).collect(),
            rank: vec![0; size],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Components of the marked set under face adjacency with wraparound.
pub fn band_components(band: &GridBand) -> usize {
    let mut sets = DisjointSets::new(band.cell_count());
    for index in 0..band.cell_count() {
        if !band.marked[index] {
            continue;
        }
        for axis in 0..band.dim() {
            let next = band.shifted(index, axis, 1);
            if band.marked[next] {
                sets.union(index, next);
            }
        }
    }
    let mut roots: Vec<usize> = (0..band.cell_count())
        .filter(|&i| band.marked[i])
        .map(|i| sets.find(i))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Pairs of marked cells that share a codimension-2 face but are not joined
/// through either of the two cells between them. Face adjacency treats these
/// as separate; the closed-cell complex treats them as touching.
pub fn corner_contacts(band: &GridBand) -> usize {
    let dim = band.dim();
    let mut count = 0;
    for index in 0..band.cell_count() {
        if !band.marked[index] {
            continue;
        }
        for i in 0..dim {
            for j in i + 1..dim {
                for dj in [-1isize, 1] {
                    let side_i = band.shifted(index, i, 1);
                    let side_j = band.shifted(index, j, dj);
                    let diagonal = band.shifted(side_i, j, dj);
                    if band.marked[diagonal] && !band.marked[side_i] && !band.marked[side_j] {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// `V - E + F` of the union of closed marked squares on the 2-torus.
pub fn band_euler_2d(band: &GridBand) -> Result<i64> {
    if band.dim() != 2 {
        return Err(Error::NotApplicable(format!(
            "the cubical Euler count is implemented for n = 4, got n = {}",
            band.n
        )));
    }
    let g = band.resolution;
    let cells = band.cell_count();
    // vertex (x, y) is the lower-left corner of cell (x, y)
    let mut vertices = vec![false; cells];
    // edges[2 * v] runs along axis 0 from v, edges[2 * v + 1] along axis 1
    let mut edges = vec![false; 2 * cells];
    let mut faces = 0i64;
    for index in 0..cells {
        if !band.marked[index] {
            continue;
        }
        faces += 1;
        let c = band.coords(index);
        let corner = |dx: usize, dy: usize| band.index(&[(c[0] + dx) % g, (c[1] + dy) % g]);
        for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            vertices[corner(dx, dy)] = true;
        }
        edges[2 * corner(0, 0)] = true;
        edges[2 * corner(0, 1)] = true;
        edges[2 * corner(0, 0) + 1] = true;
        edges[2 * corner(1, 0) + 1] = true;
    }
    let v = vertices.iter().filter(|&&x| x).count() as i64;
    let e = edges.iter().filter(|&&x| x).count() as i64;
    Ok(v - e + faces)
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleRun {
    pub resolution: usize,
    /// Every resolution tried, in order.
    pub resolutions: Vec<usize>,
    pub components: usize,
    pub euler: Option<i64>,
    pub ambiguous: usize,
    pub margin_cells: usize,
    pub corner_contacts: usize,
    pub marked_cells: usize,
    pub low_confidence: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub resolution: usize,
    /// Keep doubling while cells are ambiguous, up to this resolution.
    pub max_resolution: usize,
}

impl OracleOptions {
    pub fn for_legs(n: usize) -> Self {
        let resolution = default_resolution(n);
        OracleOptions {
            resolution,
            max_resolution: resolution * 4,
        }
    }
}

/// Builds the band, doubling the resolution while any cell is ambiguous.
pub fn run(a: &TelescopicData, options: OracleOptions) -> Result<OracleRun> {
    if a.n() > 5 {
        return Err(Error::Unsupported(format!(
            "the grid oracle handles n <= 5, got n = {}",
            a.n()
        )));
    }
    let mut resolution = options.resolution;
    let mut resolutions = Vec::new();
    loop {
        let band = build_band(a, resolution)?;
        resolutions.push(resolution);
        let next = resolution * 2;
        let fits = next <= options.max_resolution
            && next
                .checked_pow((a.n() - 2) as u32)
                .is_some_and(|c| c <= MAX_CELLS);
        if band.ambiguous > 0 && fits {
            resolution = next;
            continue;
        }
        let euler = if band.dim() == 2 {
            Some(band_euler_2d(&band)?)
        } else {
            None
        };
        return Ok(OracleRun {
            resolution,
            resolutions,
            components: band_components(&band),
            euler,
            ambiguous: band.ambiguous,
            margin_cells: band.margin_cells,
            corner_contacts: corner_contacts(&band),
            marked_cells: band.marked_cells,
            low_confidence: band.ambiguous > 0,
        });
    }
}
