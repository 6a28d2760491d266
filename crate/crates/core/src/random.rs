//! Random closed fronts for property tests and benchmarks.

use rand::Rng;

use crate::front::{Event, FrontDiagram};

#[derive(Clone, Debug)]
pub struct RandomFront {
    pub max_strands: usize,
    pub crossings: usize,
    /// (left, right) types of the vertices to place.
    pub vertices: Vec<(usize, usize)>,
    /// Chance that a crossing is marked.
    pub marked: f64,
}

impl Default for RandomFront {
    fn default() -> Self {
        Self { max_strands: 6, crossings: 6, vertices: vec![], marked: 0.0 }
    }
}

impl RandomFront {
    pub fn sample<R: Rng>(&self, rng: &mut R) -> FrontDiagram {
        let mut slices = Vec::new();
        let mut n = 0usize;
        let mut crossings = self.crossings;
        let mut vertices = self.vertices.clone();
        loop {
            let can_cross = n >= 2 && crossings > 0;
            let vertex_ok = vertices
                .last()
                .map_or(false, |&(l, r)| n >= l && n + r - l <= self.max_strands.max(l + r));
            let can_open = n + 2 <= self.max_strands;
            if crossings == 0 && vertices.is_empty() {
                break;
            }
            let roll = rng.gen_range(0..10);
            // a pending vertex that needs fewer strands forces a close
            let too_wide = vertices.last().map_or(false, |&(l, r)| n >= l && !vertex_ok && r > l);
            if n == 0 || (roll < 2 && can_open && !too_wide) || !(can_cross || vertex_ok) {
                if (!can_open || too_wide) && n >= 2 {
                    let p = rng.gen_range(0..n - 1);
                    slices.push(Event::RightCusp(p));
                    n -= 2;
                } else {
                    let p = rng.gen_range(0..=n);
                    slices.push(Event::LeftCusp(p));
                    n += 2;
                }
            } else if roll < 4 && n >= 4 {
                let p = rng.gen_range(0..n - 1);
                slices.push(Event::RightCusp(p));
                n -= 2;
            } else if vertex_ok && (roll == 9 || !can_cross) {
                let (l, r) = vertices.pop().unwrap();
                let p = rng.gen_range(0..=n - l);
                slices.push(Event::v(p, l, r));
                n = n + r - l;
            } else if can_cross {
                let p = rng.gen_range(0..n - 1);
                let marked = self.marked > 0.0 && rng.gen_bool(self.marked);
                slices.push(Event::Crossing { pos: p, marked });
                crossings -= 1;
            }
        }
        while n > 0 {
            let p = rng.gen_range(0..n - 1);
            slices.push(Event::RightCusp(p));
            n -= 2;
        }
        FrontDiagram::new(0, 0, slices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = RandomFront { vertices: vec![(2, 2), (1, 3)], ..Default::default() };
        for v in [(0, 4), (4, 0), (1, 3), (3, 1)] {
            for c in 0..6 {
                for _ in 0..20 {
                    let d = RandomFront { crossings: c, vertices: vec![v], ..Default::default() }.sample(&mut rng);
                    d.check().unwrap();
                }
            }
        }
        for _ in 0..200 {
            let d = spec.sample(&mut rng);
            d.check().unwrap();
            assert!(d.is_closed());
            assert_eq!(d.crossings().len(), 6);
            assert_eq!(d.vertices().len(), 2);
        }
    }
}
