use branchlie::branching::OracleBudget;
use branchlie::enveloping::DEFAULT_MAX_HEIGHT;
use branchlie::error::Error;
use branchlie::rootsystem::Weight;
use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

/// Validated settings shared by the batch commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub rank_min: usize,
    pub rank_max: usize,
    pub primes: Vec<u64>,
    pub height_budget: i64,
    pub time_ms: Option<u64>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(rank_min: usize, rank_max: usize, primes: Vec<u64>, height_budget: Option<i64>, time_ms: Option<u64>, format: Format) -> Result<RunConfig, Error> {
        if rank_min > rank_max || rank_min == 0 {
            return Err(Error::Hypothesis(format!("empty rank range {rank_min}..{rank_max}")));
        }
        if let Some(&p) = primes.iter().find(|&&p| p != 0 && !branchlie::is_prime(p)) {
            return Err(Error::InvalidCharacteristic(p));
        }
        let height_budget = height_budget.unwrap_or(DEFAULT_MAX_HEIGHT);
        if height_budget < 1 {
            return Err(Error::Hypothesis("height budget must be positive".into()));
        }
        Ok(RunConfig { rank_min, rank_max, primes, height_budget, time_ms, format })
    }

    pub fn budget(&self) -> OracleBudget {
        OracleBudget { gram_height: self.height_budget, time_ms: self.time_ms }
    }
}

pub fn parse_weight(s: &str) -> Result<Weight, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad coordinate {x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Weight)
}

/// Comma-separated list of characteristics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Primes(pub Vec<u64>);

pub fn parse_primes(s: &str) -> Result<Primes, String> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| format!("bad prime {x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(p) = v.iter().find(|&&p| p != 0 && !branchlie::is_prime(p)) {
        return Err(format!("{p} is not 0 or a prime"));
    }
    Ok(Primes(v))
}

/// `3`, `3..4` or `3..=4` (both ends inclusive).
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("bad rank {x:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let n = num(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

/// Size the global pool from `BRANCHLIE_THREADS` when set.
pub fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("BRANCHLIE_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("BRANCHLIE_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("BRANCHLIE_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3").unwrap(), (3, 3));
        assert_eq!(parse_range("3..4").unwrap(), (3, 4));
        assert_eq!(parse_range("3..=5").unwrap(), (3, 5));
        assert!(parse_range("4..3").is_err());
    }

    #[test]
    fn weights_and_primes() {
        assert_eq!(parse_weight("1, 1,0").unwrap(), Weight(vec![1, 1, 0]));
        assert!(parse_weight("1,x").is_err());
        assert_eq!(parse_primes("3,5,7").unwrap(), Primes(vec![3, 5, 7]));
        assert!(parse_primes("3,4").is_err());
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::new(3, 4, vec![3, 5], None, None, Format::Json).is_ok());
        assert!(RunConfig::new(4, 3, vec![3], None, None, Format::Json).is_err());
        assert!(RunConfig::new(3, 3, vec![9], None, None, Format::Json).is_err());
    }
}
