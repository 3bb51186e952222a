#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use risray_core::{Point2, PropagationParams, Segment, Transmitter, Wall};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point(rng: &mut impl Rng, lo: f64, hi: f64) -> Point2 {
    Point2::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi))
}

/// A random wall set of up to 6 walls plus two points clear of every wall.
pub struct RandomScene {
    pub walls: Vec<Wall>,
    pub a: Point2,
    pub b: Point2,
    pub max_order: usize,
}

impl RandomScene {
    pub fn params(&self) -> PropagationParams {
        PropagationParams {
            max_order: self.max_order,
            ..Default::default()
        }
    }

    pub fn tx_at(&self, p: Point2) -> Transmitter {
        Transmitter {
            position: p,
            power_dbm: 20.0,
            frequency_hz: 3.5e9,
        }
    }
}

pub fn random_scene(rng: &mut impl Rng) -> RandomScene {
    let n_walls = rng.gen_range(1..=6);
    let walls: Vec<Wall> = (0..n_walls)
        .map(|_| loop {
            let a = point(rng, 0.0, 20.0);
            let b = point(rng, 0.0, 20.0);
            if a.distance(b) > 1.0 {
                break Wall::new(Segment::new(a, b).unwrap(), rng.gen_range(0.0..12.0)).unwrap();
            }
        })
        .collect();
    let clear = |p: Point2| walls.iter().all(|w| w.segment.distance_to(p) > 0.05);
    let pick = |rng: &mut dyn rand::RngCore| loop {
        let p = Point2::new(rng.gen_range(0.0..20.0), rng.gen_range(0.0..20.0));
        if clear(p) {
            break p;
        }
    };
    let a = pick(rng);
    let b = loop {
        let b = pick(rng);
        if b.distance(a) > 0.5 {
            break b;
        }
    };
    RandomScene {
        walls,
        a,
        b,
        max_order: rng.gen_range(0..=3),
    }
}
