//! Normal rulings, ruling polynomials, transfer matrices and Kauffman-Vogel
//! checks for bordered Legendrian graph fronts.

use std::sync::OnceLock;

pub mod dga;
pub mod error;
pub mod front;
pub mod kauffman;
pub mod maslov;
pub mod pd;
pub mod poly;
pub mod random;
pub mod resolve;
pub mod ruling;

pub use error::{Error, Result};
pub use front::{Event, FrontDiagram};
pub use maslov::{MaslovPotential, Ring};
pub use poly::{HalfLaurent, MultiLaurent};
pub use resolve::Matching;

/// Thread pool sized by `RULING_LAB_THREADS` when set.
pub fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("RULING_LAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
            b = b.num_threads(n.max(1));
        }
        b.build().expect("thread pool")
    })
}
