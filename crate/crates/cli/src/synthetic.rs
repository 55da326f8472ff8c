//! `kind:key=value,...` descriptions of generated problems.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::CliError;

/// A generated problem family with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticSpec {
    /// `logreg:m=200,features=55[,noise=0.1][,seed=S]`: Gaussian features,
    /// labels from a noisy linear model.
    LogReg { m: usize, features: usize, noise: f64, seed: Option<u64> },
    /// `quadratic:n=50[,mu=0.1][,lipschitz=L][,m=M][,seed=S]`: coupled quadratic.
    /// `lipschitz` selects the conditioned family, `m` the finite-sum one.
    Quadratic { n: usize, mu: f64, lipschitz: Option<f64>, m: Option<usize>, seed: Option<u64> },
}

impl SyntheticSpec {
    /// Seed for the generator: the one in the spec, else `fallback`.
    pub fn data_seed(&self, fallback: u64) -> u64 {
        match self {
            SyntheticSpec::LogReg { seed, .. } | SyntheticSpec::Quadratic { seed, .. } => seed.unwrap_or(fallback),
        }
    }
}

struct Params<'a> {
    spec: &'a str,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("bad value {v:?} for {key} in {:?}", self.spec))),
        }
    }

    fn require<T: FromStr>(&mut self, key: &str) -> Result<T, CliError> {
        self.take(key)?.ok_or_else(|| CliError::Config(format!("{:?} needs {key}=...", self.spec)))
    }

    fn finish(self) -> Result<(), CliError> {
        match self.map.keys().next() {
            Some(k) => Err(CliError::Config(format!("unknown key {k} in {:?}", self.spec))),
            None => Ok(()),
        }
    }
}

impl FromStr for SyntheticSpec {
    type Err = CliError;

    fn from_str(spec: &str) -> Result<Self, CliError> {
        let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut map = BTreeMap::new();
        for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("expected key=value, got {pair:?} in {spec:?}")))?;
            if map.insert(k.trim(), v.trim()).is_some() {
                return Err(CliError::Config(format!("duplicate key {k} in {spec:?}")));
            }
        }
        let mut p = Params { spec, map };
        let parsed = match kind.trim() {
            "logreg" => SyntheticSpec::LogReg {
                m: p.require("m")?,
                features: p.require("features")?,
                noise: p.take("noise")?.unwrap_or(0.1),
                seed: p.take("seed")?,
            },
            "quadratic" => SyntheticSpec::Quadratic {
                n: p.require("n")?,
                mu: p.take("mu")?.unwrap_or(0.1),
                lipschitz: p.take("lipschitz")?,
                m: p.take("m")?,
                seed: p.take("seed")?,
            },
            other => return Err(CliError::Config(format!("unknown problem kind {other:?}; use logreg or quadratic"))),
        };
        p.finish()?;
        Ok(parsed)
    }
}

impl fmt::Display for SyntheticSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntheticSpec::LogReg { m, features, noise, seed } => {
                write!(f, "logreg:m={m},features={features},noise={noise}")?;
                if let Some(s) = seed {
                    write!(f, ",seed={s}")?;
                }
            }
            SyntheticSpec::Quadratic { n, mu, lipschitz, m, seed } => {
                write!(f, "quadratic:n={n},mu={mu}")?;
                if let Some(l) = lipschitz {
                    write!(f, ",lipschitz={l}")?;
                }
                if let Some(m) = m {
                    write!(f, ",m={m}")?;
                }
                if let Some(s) = seed {
                    write!(f, ",seed={s}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logreg_with_defaults() {
        let s: SyntheticSpec = "logreg:m=200,features=55".parse().unwrap();
        assert_eq!(s, SyntheticSpec::LogReg { m: 200, features: 55, noise: 0.1, seed: None });
        assert_eq!(s.data_seed(7), 7);
    }

    #[test]
    fn quadratic_round_trips_through_display() {
        let s: SyntheticSpec = "quadratic:n=50, lipschitz=100, seed=3".parse().unwrap();
        assert_eq!(s.data_seed(7), 3);
        assert_eq!(s.to_string().parse::<SyntheticSpec>().unwrap(), s);
    }

    #[test]
    fn rejects_malformed_specs() {
        for bad in ["logreg:m=200", "logreg:m=x,features=3", "cubic:n=3", "quadratic:n=3,n=4", "quadratic:n=3,zeta=1", "quadratic:n"] {
            assert!(bad.parse::<SyntheticSpec>().is_err(), "{bad}");
        }
    }
}
