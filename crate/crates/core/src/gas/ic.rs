//! The four initial conditions: hot/cold halves, a corner cluster,
//! projectiles on a block, and a chain thrown at a wall.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{GasParams, GasState, DIM};
use crate::error::{Error, Result};
use crate::rng::stream;

pub const MAX_ATTEMPTS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialCondition {
    /// A hot on the left half, B cold on the right half.
    HotColdHalves = 1,
    /// All particles in a corner with uniform random velocities.
    Corner = 2,
    /// A few fast projectiles aimed at a resting block.
    Projectiles = 3,
    /// A rightward-moving chain along y = x².
    Chain = 4,
}

impl InitialCondition {
    pub fn from_index(k: u32) -> Result<Self> {
        match k {
            1 => Ok(Self::HotColdHalves),
            2 => Ok(Self::Corner),
            3 => Ok(Self::Projectiles),
            4 => Ok(Self::Chain),
            _ => Err(Error::InvalidParam(format!("initial condition {k} is not one of 1..4"))),
        }
    }

    pub fn index(self) -> u32 {
        self as u32
    }
}

/// A generated initial state and its subsystem A (sorted indices).
#[derive(Clone, Debug)]
pub struct GasSetup {
    pub state: GasState,
    pub subsystem_a: Vec<usize>,
}

struct Placer<'a> {
    placed: Vec<[f64; 2]>,
    sigma: f64,
    attempts: usize,
    params: &'a GasParams,
}

impl<'a> Placer<'a> {
    fn new(params: &'a GasParams) -> Self {
        Self { placed: Vec::with_capacity(params.n), sigma: 2.0 * params.radius, attempts: 0, params }
    }

    fn free(&self, p: [f64; 2]) -> bool {
        let s2 = self.sigma * self.sigma;
        self.placed.iter().all(|q| {
            let dx = q[0] - p[0];
            let dy = q[1] - p[1];
            dx * dx + dy * dy >= s2
        })
    }

    /// Uniform rejection sampling inside [x0, x1] × [y0, y1] (centers).
    fn place_uniform<R: Rng>(&mut self, rng: &mut R, x: (f64, f64), y: (f64, f64)) -> Result<()> {
        let r = self.params.radius;
        let l = self.params.box_l;
        let (x0, x1) = (x.0.max(r), x.1.min(l - r));
        let (y0, y1) = (y.0.max(r), y.1.min(l - r));
        loop {
            self.attempts += 1;
            if self.attempts > MAX_ATTEMPTS {
                return Err(Error::Simulation(format!("no overlap-free placement after {MAX_ATTEMPTS} attempts")));
            }
            let p = [rng.random_range(x0..=x1), rng.random_range(y0..=y1)];
            if self.free(p) {
                self.placed.push(p);
                return Ok(());
            }
        }
    }
}

/// Scale all velocities by one factor so the kinetic energy is N d β⁻¹/2.
fn normalize_energy(vel: &mut [[f64; 2]], params: &GasParams) -> Result<()> {
    let e: f64 = vel.iter().map(|v| 0.5 * params.mass * (v[0] * v[0] + v[1] * v[1])).sum();
    if !(e > 0.0) {
        return Err(Error::Simulation("initial velocities carry no energy".into()));
    }
    let s = (params.total_energy() / e).sqrt();
    for v in vel.iter_mut() {
        v[0] *= s;
        v[1] *= s;
    }
    Ok(())
}

fn gaussian_velocity<R: Rng>(rng: &mut R, kt: f64, mass: f64) -> [f64; 2] {
    let sd = (kt / mass).sqrt();
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    [a * sd, b * sd]
}

pub fn generate_ic(params: &GasParams, ic: InitialCondition) -> Result<GasSetup> {
    params.validate()?;
    let mut rng = stream(params.seed, "ic");
    let n = params.n;
    let l = params.box_l;
    let mut placer = Placer::new(params);
    let (mut vel, subsystem_a) = match ic {
        InitialCondition::HotColdHalves => {
            let n_a = n / 2;
            let mut vel = Vec::with_capacity(n);
            for i in 0..n {
                let (x, kt) = if i < n_a { ((0.0, 0.5 * l), 1.5) } else { ((0.5 * l, l), 0.5) };
                placer.place_uniform(&mut rng, x, (0.0, l))?;
                vel.push(gaussian_velocity(&mut rng, kt * params.beta_inv, params.mass));
            }
            (vel, (0..n_a).collect::<Vec<_>>())
        }
        InitialCondition::Corner => {
            let side = 0.4 * l;
            let mut vel = Vec::with_capacity(n);
            for _ in 0..n {
                placer.place_uniform(&mut rng, (0.0, side), (0.0, side))?;
                vel.push([rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)]);
            }
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            let mut a = idx[..(n / 4).max(1)].to_vec();
            a.sort_unstable();
            (vel, a)
        }
        InitialCondition::Projectiles => {
            let n_proj = (n / 20).max(1);
            let n_block = n - n_proj;
            let spacing = 2.5 * params.radius;
            let cols = (n_block as f64).sqrt().ceil() as usize;
            let rows = n_block.div_ceil(cols);
            let width = cols as f64 * spacing;
            let height = rows as f64 * spacing;
            if width > 0.45 * l || height > 0.9 * l {
                return Err(Error::InvalidParam("block does not fit in the box".into()));
            }
            let x0 = 0.9 * l - width;
            let y0 = 0.5 * (l - height);
            let mut vel = Vec::with_capacity(n);
            for k in 0..n_block {
                let (c, r) = (k % cols, k / cols);
                placer.placed.push([x0 + (c as f64 + 0.5) * spacing, y0 + (r as f64 + 0.5) * spacing]);
                vel.push([0.0, 0.0]);
            }
            for _ in 0..n_proj {
                placer.place_uniform(&mut rng, (0.05 * l, 0.35 * l), (y0, y0 + height))?;
                vel.push([1.0, 0.1 * rng.random_range(-1.0..=1.0)]);
            }
            (vel, (n_block..n).collect::<Vec<_>>())
        }
        InitialCondition::Chain => {
            let sites = ChainSites::new(params);
            let mut occupied = vec![false; sites.nx * sites.nx];
            let mut vel = Vec::with_capacity(n);
            for k in 0..n {
                let x = k as f64 / (2.0 * n as f64);
                let y = x * x;
                let site = sites.nearest_free([x * l, y * l], &occupied)?;
                occupied[site] = true;
                placer.placed.push(sites.center(site));
                vel.push([(3.0 * x).exp(), (3.0 * y).exp()]);
            }
            // A: the leftmost quarter after snapping, ties by index.
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| placer.placed[i][0].total_cmp(&placer.placed[j][0]).then(i.cmp(&j)));
            let mut a = order[..(n / 4).max(1)].to_vec();
            a.sort_unstable();
            (vel, a)
        }
    };
    normalize_energy(&mut vel, params)?;
    debug_assert_eq!(DIM, 2);
    Ok(GasSetup { state: GasState { pos: placer.placed, vel, time: 0.0 }, subsystem_a })
}

/// Square lattice with spacing 2.2r whose sites keep disks inside the box.
struct ChainSites {
    origin: f64,
    spacing: f64,
    nx: usize,
}

impl ChainSites {
    fn new(params: &GasParams) -> Self {
        let spacing = 2.2 * params.radius;
        let origin = params.radius * 1.05;
        let nx = ((params.box_l - 2.0 * origin) / spacing).floor() as usize + 1;
        Self { origin, spacing, nx }
    }

    fn center(&self, site: usize) -> [f64; 2] {
        let (i, j) = (site % self.nx, site / self.nx);
        [self.origin + i as f64 * self.spacing, self.origin + j as f64 * self.spacing]
    }

    /// Closest unoccupied site to `p`, searching square rings outward.
    fn nearest_free(&self, p: [f64; 2], occupied: &[bool]) -> Result<usize> {
        let to_idx = |c: f64| (((c - self.origin) / self.spacing).round().max(0.0) as usize).min(self.nx - 1);
        let (ci, cj) = (to_idx(p[0]) as i64, to_idx(p[1]) as i64);
        for ring in 0..self.nx as i64 {
            let mut best: Option<(f64, usize)> = None;
            for di in -ring..=ring {
                for dj in -ring..=ring {
                    if di.abs().max(dj.abs()) != ring {
                        continue;
                    }
                    let (i, j) = (ci + di, cj + dj);
                    if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.nx as i64 {
                        continue;
                    }
                    let site = j as usize * self.nx + i as usize;
                    if occupied[site] {
                        continue;
                    }
                    let c = self.center(site);
                    let d = (c[0] - p[0]).powi(2) + (c[1] - p[1]).powi(2);
                    if best.is_none_or(|(b, s)| d < b || (d == b && site < s)) {
                        best = Some((d, site));
                    }
                }
            }
            if let Some((_, s)) = best {
                return Ok(s);
            }
        }
        Err(Error::Simulation("no free lattice site for the chain".into()))
    }
}
