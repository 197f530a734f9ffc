//! Event-driven hard-disk dynamics with one pending event per particle and
//! lazy invalidation through per-particle collision counters.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GasState {
    pub pos: Vec<[f64; 2]>,
    pub vel: Vec<[f64; 2]>,
    pub time: f64,
}

impl GasState {
    pub fn n(&self) -> usize {
        self.pos.len()
    }

    pub fn kinetic_energy(&self, mass: f64) -> f64 {
        self.vel.iter().map(|v| 0.5 * mass * (v[0] * v[0] + v[1] * v[1])).sum()
    }

    pub fn energy_of(&self, idx: &[usize], mass: f64) -> f64 {
        idx.iter().map(|&i| 0.5 * mass * (self.vel[i][0] * self.vel[i][0] + self.vel[i][1] * self.vel[i][1])).sum()
    }

    pub fn momentum(&self, mass: f64) -> [f64; 2] {
        let mut p = [0.0; 2];
        for v in &self.vel {
            p[0] += mass * v[0];
            p[1] += mass * v[1];
        }
        p
    }

    /// Smallest center distance over all pairs.
    pub fn min_pair_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                let dx = self.pos[j][0] - self.pos[i][0];
                let dy = self.pos[j][1] - self.pos[i][1];
                best = best.min((dx * dx + dy * dy).sqrt());
            }
        }
        best
    }

    /// Largest distance by which a center leaves [r, L − r]².
    pub fn max_wall_violation(&self, radius: f64, box_l: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for p in &self.pos {
            for &c in p {
                worst = worst.max(radius - c).max(c - (box_l - radius));
            }
        }
        worst
    }

    /// Columnar text `t,id,x,y,vx,vy`, one line per particle.
    pub fn snapshot_text(&self) -> String {
        let mut s = String::new();
        for (i, (p, v)) in self.pos.iter().zip(&self.vel).enumerate() {
            s.push_str(&format!("{},{},{},{},{},{}\n", self.time, i, p[0], p[1], v[0], v[1]));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Wall {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Partner {
    Particle(usize),
    Wall(Wall),
}

impl Partner {
    fn key(&self) -> usize {
        match self {
            Partner::Wall(Wall::X) => 0,
            Partner::Wall(Wall::Y) => 1,
            Partner::Particle(j) => 2 + j,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Event {
    time: f64,
    owner: usize,
    partner: Partner,
    owner_count: u64,
    partner_count: u64,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // Reversed so that BinaryHeap pops the earliest event, ties going to the
    // lower particle index.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.owner.cmp(&self.owner))
            .then_with(|| other.partner.key().cmp(&self.partner.key()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SimStats {
    pub pair_collisions: u64,
    pub wall_collisions: u64,
    pub stale_events: u64,
}

impl SimStats {
    pub fn collisions(&self) -> u64 {
        self.pair_collisions + self.wall_collisions
    }
}

pub struct Simulator {
    state: GasState,
    radius: f64,
    box_l: f64,
    interacting: bool,
    counts: Vec<u64>,
    queue: BinaryHeap<Event>,
    stats: SimStats,
}

/// Time until two disks at separation `dr` with relative velocity `dv`
/// touch, or None if they do not approach. Uses the cancellation-free root.
pub fn pair_collision_time(dr: [f64; 2], dv: [f64; 2], sigma: f64) -> Option<f64> {
    let b = dr[0] * dv[0] + dr[1] * dv[1];
    if b >= 0.0 {
        return None;
    }
    let vv = dv[0] * dv[0] + dv[1] * dv[1];
    let rr = dr[0] * dr[0] + dr[1] * dr[1];
    let c = rr - sigma * sigma;
    let disc = b * b - vv * c;
    if disc < 0.0 {
        return None;
    }
    Some((c / (-b + disc.sqrt())).max(0.0))
}

fn wall_time(x: f64, v: f64, lo: f64, hi: f64) -> Option<f64> {
    if v > 0.0 {
        Some(((hi - x) / v).max(0.0))
    } else if v < 0.0 {
        Some(((lo - x) / v).max(0.0))
    } else {
        None
    }
}

impl Simulator {
    pub fn new(state: GasState, radius: f64, box_l: f64, interacting: bool) -> Result<Self> {
        let n = state.n();
        if state.vel.len() != n {
            return Err(Error::Simulation("positions and velocities differ in length".into()));
        }
        let sigma = 2.0 * radius;
        for i in 0..n {
            for k in 0..2 {
                let c = state.pos[i][k];
                if c < radius * (1.0 - 1e-9) || c > box_l - radius * (1.0 - 1e-9) {
                    return Err(Error::Simulation(format!("particle {i} starts outside the box")));
                }
            }
            if interacting {
                for j in (i + 1)..n {
                    let dx = state.pos[j][0] - state.pos[i][0];
                    let dy = state.pos[j][1] - state.pos[i][1];
                    if (dx * dx + dy * dy).sqrt() < sigma * (1.0 - 1e-9) {
                        return Err(Error::Simulation(format!("particles {i} and {j} overlap initially")));
                    }
                }
            }
        }
        let mut sim = Self {
            state,
            radius,
            box_l,
            interacting,
            counts: vec![0; n],
            queue: BinaryHeap::with_capacity(4 * n),
            stats: SimStats::default(),
        };
        for i in 0..n {
            sim.predict(i);
        }
        Ok(sim)
    }

    pub fn state(&self) -> &GasState {
        &self.state
    }

    pub fn stats(&self) -> SimStats {
        self.stats
    }

    pub fn time(&self) -> f64 {
        self.state.time
    }

    /// Push the earliest future event of particle i.
    fn predict(&mut self, i: usize) {
        let now = self.state.time;
        let p = self.state.pos[i];
        let v = self.state.vel[i];
        let (lo, hi) = (self.radius, self.box_l - self.radius);
        let mut best: Option<(f64, Partner)> = None;
        let consider = |dt: f64, partner: Partner, best: &mut Option<(f64, Partner)>| {
            if best.is_none_or(|(b, q)| dt < b || (dt == b && partner.key() < q.key())) {
                *best = Some((dt, partner));
            }
        };
        if let Some(dt) = wall_time(p[0], v[0], lo, hi) {
            consider(dt, Partner::Wall(Wall::X), &mut best);
        }
        if let Some(dt) = wall_time(p[1], v[1], lo, hi) {
            consider(dt, Partner::Wall(Wall::Y), &mut best);
        }
        if self.interacting {
            let sigma = 2.0 * self.radius;
            for j in 0..self.state.n() {
                if j == i {
                    continue;
                }
                let q = self.state.pos[j];
                let w = self.state.vel[j];
                if let Some(dt) = pair_collision_time([q[0] - p[0], q[1] - p[1]], [w[0] - v[0], w[1] - v[1]], sigma) {
                    consider(dt, Partner::Particle(j), &mut best);
                }
            }
        }
        if let Some((dt, partner)) = best {
            let partner_count = match partner {
                Partner::Particle(j) => self.counts[j],
                Partner::Wall(_) => 0,
            };
            self.queue.push(Event { time: now + dt, owner: i, partner, owner_count: self.counts[i], partner_count });
        }
    }

    fn drift(&mut self, t: f64) -> Result<()> {
        let dt = t - self.state.time;
        if dt < 0.0 {
            return Err(Error::Simulation(format!("event time {t} precedes the clock {}", self.state.time)));
        }
        if dt > 0.0 {
            for (p, v) in self.state.pos.iter_mut().zip(&self.state.vel) {
                p[0] += v[0] * dt;
                p[1] += v[1] * dt;
            }
            self.state.time = t;
        }
        Ok(())
    }

    /// Process the next valid event if it happens no later than `limit`.
    /// Returns false when the next event lies beyond `limit` (or none is
    /// pending).
    fn step(&mut self, limit: f64) -> Result<bool> {
        loop {
            let Some(ev) = self.queue.peek().copied() else { return Ok(false) };
            if ev.time > limit {
                return Ok(false);
            }
            self.queue.pop();
            if ev.owner_count != self.counts[ev.owner] {
                continue;
            }
            if let Partner::Particle(j) = ev.partner {
                if ev.partner_count != self.counts[j] {
                    self.stats.stale_events += 1;
                    self.predict(ev.owner);
                    continue;
                }
            }
            self.drift(ev.time)?;
            let i = ev.owner;
            match ev.partner {
                Partner::Wall(w) => {
                    let k = if w == Wall::X { 0 } else { 1 };
                    self.state.vel[i][k] = -self.state.vel[i][k];
                    self.counts[i] += 1;
                    self.stats.wall_collisions += 1;
                    self.predict(i);
                }
                Partner::Particle(j) => {
                    let dr = [self.state.pos[j][0] - self.state.pos[i][0], self.state.pos[j][1] - self.state.pos[i][1]];
                    let dv = [self.state.vel[j][0] - self.state.vel[i][0], self.state.vel[j][1] - self.state.vel[i][1]];
                    let rr = dr[0] * dr[0] + dr[1] * dr[1];
                    // Equal masses: swap the velocity components along dr.
                    let f = (dr[0] * dv[0] + dr[1] * dv[1]) / rr;
                    for k in 0..2 {
                        self.state.vel[i][k] += f * dr[k];
                        self.state.vel[j][k] -= f * dr[k];
                    }
                    self.counts[i] += 1;
                    self.counts[j] += 1;
                    self.stats.pair_collisions += 1;
                    self.predict(i);
                    self.predict(j);
                }
            }
            return Ok(true);
        }
    }

    /// Advance to time t, processing every event up to it.
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        while self.step(t)? {}
        self.drift(t.max(self.state.time))
    }

    /// Process exactly `count` collisions (pair or wall).
    pub fn run_collisions(&mut self, count: u64) -> Result<()> {
        let target = self.stats.collisions() + count;
        while self.stats.collisions() < target {
            if !self.step(f64::INFINITY)? {
                return Err(Error::Simulation("no pending events".into()));
            }
        }
        Ok(())
    }

    /// States at each requested time (ascending, not before the clock).
    pub fn sample(&mut self, times: &[f64]) -> Result<Vec<GasState>> {
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            self.advance_to(t)?;
            out.push(self.state.clone());
        }
        Ok(out)
    }
}

/// Run from `state` and return the states at `sample_times`.
pub fn simulate(
    state: GasState,
    radius: f64,
    box_l: f64,
    interacting: bool,
    sample_times: &[f64],
) -> Result<(Vec<GasState>, SimStats)> {
    let mut sim = Simulator::new(state, radius, box_l, interacting)?;
    let states = sim.sample(sample_times)?;
    Ok((states, sim.stats()))
}
