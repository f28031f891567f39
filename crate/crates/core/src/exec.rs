//! Sequential or data-parallel evaluation of independent work items.
//!
//! The `parallel` feature (on by default) pulls in rayon. Both strategies
//! return results in input order, so outputs are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Strategy::Parallel;
        #[cfg(not(feature = "parallel"))]
        Strategy::Sequential
    }
}

impl Strategy {
    /// Every strategy compiled into this build.
    pub fn available() -> Vec<Strategy> {
        vec![
            Strategy::Sequential,
            #[cfg(feature = "parallel")]
            Strategy::Parallel,
        ]
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            Strategy::Sequential => items.into_iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => items.into_par_iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_keep_order() {
        let items: Vec<u64> = (0..1000).collect();
        let outs: Vec<Vec<u64>> = Strategy::available()
            .into_iter()
            .map(|s| s.map(items.clone(), |x| x * x + 1))
            .collect();
        for out in &outs {
            assert_eq!(out, &outs[0]);
        }
        assert_eq!(outs[0][10], 101);
    }
}
