//! Random small systems for the property harnesses.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::potential::LocallyConstantPotential;
use crate::symbolic::{Alphabet, EventuallyPeriodicPoint, FactorCode, Sft, Sym};

const NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// An irreducible SFT on `2 ..= max_symbols` symbols: a random Hamiltonian
/// cycle plus random extra edges.
pub fn random_sft<R: Rng>(rng: &mut R, max_symbols: usize) -> Sft {
    let n = rng.random_range(2..=max_symbols.clamp(2, NAMES.len()));
    let mut order: Vec<Sym> = (0..n as Sym).collect();
    order.shuffle(rng);
    let density = rng.random_range(0.15..0.6);
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((order[i], order[(i + 1) % n]));
    }
    for a in 0..n as Sym {
        for b in 0..n as Sym {
            if rng.random_bool(density) {
                edges.push((a, b));
            }
        }
    }
    let alpha = Alphabet::new(NAMES[..n].iter().copied()).expect("distinct names");
    Sft::from_indices(alpha, edges).expect("cycle keeps every symbol")
}

/// A code from `X` onto an image alphabet of random size.
pub fn random_code<R: Rng>(rng: &mut R, sft: Sft) -> FactorCode {
    let n = sft.len();
    let k = rng.random_range(1..=n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut map = vec![0 as Sym; n];
    for (i, &a) in order.iter().enumerate() {
        map[a] = if i < k { i as Sym } else { rng.random_range(0..k) as Sym };
    }
    let image = Alphabet::new((0..k).map(|i| i.to_string())).expect("distinct names");
    FactorCode::from_indices(sft, image, map).expect("every image symbol is used")
}

/// A pair potential with values uniform in `[0, ln 2]`.
pub fn random_pair_potential<R: Rng>(rng: &mut R, sft: &Sft) -> LocallyConstantPotential {
    let n = sft.len();
    let table: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.0..=std::f64::consts::LN_2)).collect();
    LocallyConstantPotential::pair(sft, |a, b| table[a as usize * n + b as usize]).expect("small window")
}

/// A potential on `[-1, 1]` with values uniform in `[0, ln 2]`.
pub fn random_radius_one_potential<R: Rng>(rng: &mut R, sft: &Sft) -> LocallyConstantPotential {
    let n = sft.len();
    let table: Vec<f64> = (0..n * n * n).map(|_| rng.random_range(0.0..=std::f64::consts::LN_2)).collect();
    LocallyConstantPotential::from_window_fn(sft, -1, 1, |w| {
        table[(w[0] as usize * n + w[1] as usize) * n + w[2] as usize]
    })
    .expect("small window")
}

/// A closed walk of length `1 ..= max_len`, found by random walks.
pub fn random_x_cycle<R: Rng>(rng: &mut R, sft: &Sft, max_len: usize) -> Option<Vec<Sym>> {
    for _ in 0..500 {
        let q = rng.random_range(1..=max_len);
        let start = rng.random_range(0..sft.len()) as Sym;
        let mut walk = vec![start];
        while walk.len() < q {
            let succ = sft.successors(*walk.last().unwrap());
            walk.push(succ[rng.random_range(0..succ.len())]);
        }
        if sft.allows(*walk.last().unwrap(), start) {
            return Some(walk);
        }
    }
    None
}

/// Symbols after `from` along a shortest walk ending at `to` (nonempty).
pub fn shortest_walk(sft: &Sft, from: Sym, to: Sym) -> Vec<Sym> {
    let n = sft.len();
    let mut prev = vec![None; n];
    let mut queue = VecDeque::new();
    for &b in sft.successors(from) {
        if prev[b as usize].is_none() {
            prev[b as usize] = Some(from);
            queue.push_back(b);
        }
    }
    while let Some(a) = queue.pop_front() {
        if a == to {
            break;
        }
        for &b in sft.successors(a) {
            if prev[b as usize].is_none() {
                prev[b as usize] = Some(a);
                queue.push_back(b);
            }
        }
    }
    // Nodes first reached from `from` itself are exactly the first steps.
    let mut path = vec![to];
    let mut cur = to;
    loop {
        let p = prev[cur as usize].expect("irreducible system");
        if p == from {
            break;
        }
        path.push(p);
        cur = p;
    }
    path.reverse();
    path
}

/// A random instance: system, pair potential and an image cycle word that
/// lifts to a periodic orbit.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub code: FactorCode,
    pub potential: LocallyConstantPotential,
    pub x_cycle: Vec<Sym>,
    pub cycle: Vec<Sym>,
}

pub fn random_instance<R: Rng>(rng: &mut R, max_symbols: usize, max_q: usize) -> RandomInstance {
    loop {
        let sft = random_sft(rng, max_symbols);
        let Some(x_cycle) = random_x_cycle(rng, &sft, max_q) else {
            continue;
        };
        let potential = random_pair_potential(rng, &sft);
        let code = random_code(rng, sft);
        let cycle = code.apply_word(&x_cycle);
        return RandomInstance {
            code,
            potential,
            x_cycle,
            cycle,
        };
    }
}

/// An eventually periodic X-point `c1^∞ . center c2^∞` mapped to the image.
pub fn random_point<R: Rng>(rng: &mut R, code: &FactorCode, max_q: usize, max_center: usize) -> EventuallyPeriodicPoint {
    let sft = code.domain();
    let c1 = random_x_cycle(rng, sft, max_q).unwrap_or_else(|| closing_cycle(sft));
    let c2 = random_x_cycle(rng, sft, max_q).unwrap_or_else(|| closing_cycle(sft));
    let mut center = Vec::new();
    let mut last = *c1.last().unwrap();
    for _ in 0..rng.random_range(0..=max_center) {
        let succ = sft.successors(last);
        last = succ[rng.random_range(0..succ.len())];
        center.push(last);
    }
    if !sft.allows(last, c2[0]) {
        let mut path = shortest_walk(sft, last, c2[0]);
        path.pop();
        center.extend(path);
    }
    let anchor = rng.random_range(-3..=3);
    let x = EventuallyPeriodicPoint::new(c1, center, c2, anchor).expect("nonempty tails");
    debug_assert!(x.validate(|a, b| sft.allows(a, b)).is_ok());
    EventuallyPeriodicPoint::new(
        code.apply_word(x.left_tail()),
        code.apply_word(x.center()),
        code.apply_word(x.right_tail()),
        anchor,
    )
    .expect("nonempty tails")
}

fn closing_cycle(sft: &Sft) -> Vec<Sym> {
    let mut c = vec![0];
    c.extend(shortest_walk(sft, 0, 0));
    c.pop();
    c
}
