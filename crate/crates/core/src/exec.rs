//! Data-parallel map used by the grid checks, the pair enumeration of the
//! EO engine and table generation. With the `parallel` feature (default)
//! work is spread over rayon's pool; without it everything runs on the
//! calling thread. Output order always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
        }
    }

    /// Map, failing if any item fails. Under `Parallel` the reported
    /// error is not necessarily the first one in input order.
    pub fn try_map<T, R, E, F>(self, items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(&T) -> Result<R, E> + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = Execution::Sequential.map(&xs, |x| x * x);
        let def = Execution::default().map(&xs, |x| x * x);
        assert_eq!(seq, def);
        assert_eq!(seq[999], 998_001);
    }

    #[test]
    fn try_map_reports_an_error() {
        let xs: Vec<i32> = (0..100).collect();
        let r: Result<Vec<i32>, i32> =
            Execution::default().try_map(&xs, |&x| if x % 40 == 39 { Err(x) } else { Ok(x) });
        assert!(r.is_err());
    }
}
