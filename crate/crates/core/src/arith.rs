//! Integer arithmetic kernel: a linear sieve with multiplicative tables, the
//! solution count rho_k(D), lcm power sums and truncated Mobius inversion.

use crate::error::{capacity, domain, Result};
use crate::numeric::kahan_sum;
use num_integer::Integer;

/// Largest sieve bound accepted by [`ArithCache::new`].
pub const MAX_SIEVE: u64 = 100_000_000;
/// Largest modulus accepted by [`rho_k_bruteforce`].
pub const MAX_RHO_SCAN: u64 = 1_000_000;

/// Sieved tables up to a bound `N`. Immutable once built.
#[derive(Debug, Clone)]
pub struct ArithCache {
    bound: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
    mobius: Vec<i8>,
    totient: Vec<u32>,
}

impl ArithCache {
    /// Linear sieve over `0..=n`. Requires `2 <= n <= MAX_SIEVE`.
    pub fn new(n: u64) -> Result<Self> {
        if !(2..=MAX_SIEVE).contains(&n) {
            return Err(capacity(format!(
                "sieve bound {n} outside 2..={MAX_SIEVE}"
            )));
        }
        let len = n as usize + 1;
        let mut spf = vec![0u32; len];
        let mut primes: Vec<u32> = Vec::new();
        let mut mobius = vec![0i8; len];
        let mut totient = vec![0u32; len];
        mobius[1] = 1;
        totient[1] = 1;
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
                mobius[i] = -1;
                totient[i] = i as u32 - 1;
            }
            let si = spf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > si || ip >= len {
                    break;
                }
                spf[ip] = p;
                if p == si {
                    mobius[ip] = 0;
                    totient[ip] = totient[i] * p;
                } else {
                    mobius[ip] = -mobius[i];
                    totient[ip] = totient[i] * (p - 1);
                }
            }
        }
        Ok(Self {
            bound: n,
            spf,
            primes,
            mobius,
            totient,
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Primes up to the bound, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        (n >= 2 && n <= self.bound).then(|| self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n <= self.bound {
            return n >= 2 && self.spf[n as usize] as u64 == n;
        }
        let f = self.factorize(n);
        f.len() == 1 && f[0].1 == 1
    }

    pub fn mobius(&self, n: u64) -> i8 {
        if n <= self.bound {
            return self.mobius[n as usize];
        }
        let f = self.factorize(n);
        if f.iter().any(|&(_, e)| e > 1) {
            0
        } else if f.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn totient(&self, n: u64) -> u64 {
        if n <= self.bound {
            return self.totient[n as usize] as u64;
        }
        self.factorize(n)
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Prime factorization as ascending `(p, v_p(n))` pairs.
    ///
    /// # Panics
    /// If `n == 0` or `n` exceeds the square of the bound.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        self.try_factorize(n).expect("factorization out of range")
    }

    pub fn try_factorize(&self, mut n: u64) -> Result<Vec<(u64, u32)>> {
        if n == 0 {
            return Err(domain("cannot factor 0"));
        }
        let mut out = Vec::new();
        if n > self.bound {
            if (n as u128) > (self.bound as u128).pow(2) {
                return Err(capacity(format!(
                    "{n} exceeds the square of the sieve bound {}",
                    self.bound
                )));
            }
            for &p in &self.primes {
                let p = p as u64;
                if p * p > n || n <= self.bound {
                    break;
                }
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                if e > 0 {
                    out.push((p, e));
                }
            }
            if n > self.bound {
                out.push((n, 1));
                return Ok(out);
            }
        }
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        Ok(out)
    }

    pub fn divisors(&self, n: u64) -> Vec<u64> {
        let mut ds = vec![1u64];
        for (p, e) in self.factorize(n) {
            let len = ds.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    ds.push(ds[i] * pk);
                }
            }
        }
        ds.sort_unstable();
        ds
    }

    /// omega(n): number of distinct prime divisors.
    pub fn omega(&self, n: u64) -> u32 {
        self.factorize(n).len() as u32
    }

    /// Number of prime divisors counted with multiplicity.
    pub fn omega_with_multiplicity(&self, n: u64) -> u32 {
        self.factorize(n).iter().map(|&(_, e)| e).sum()
    }

    /// Sum of the distinct prime divisors of `n`.
    pub fn omega_big_sum(&self, n: u64) -> u64 {
        self.factorize(n).iter().map(|&(p, _)| p).sum()
    }

    /// d(n), the number of divisors.
    pub fn divisor_count(&self, n: u64) -> u64 {
        self.factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// sigma_s(n) = sum over d | n of d^s.
    pub fn sigma(&self, n: u64, s: f64) -> f64 {
        self.factorize(n)
            .iter()
            .map(|&(p, e)| {
                let ps = (p as f64).powf(s);
                let mut term = 1.0;
                let mut acc = 1.0;
                for _ in 0..e {
                    term *= ps;
                    acc += term;
                }
                acc
            })
            .product()
    }

    pub fn valuation(&self, n: u64, p: u64) -> u32 {
        if n == 0 {
            return u32::MAX;
        }
        let mut n = n;
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        e
    }

    /// P^-(n), with P^-(0) = 2 and P^-(1) = `u64::MAX` standing for +infinity.
    pub fn least_prime_factor(&self, n: u64) -> u64 {
        match n {
            0 => 2,
            1 => u64::MAX,
            _ => self.factorize(n)[0].0,
        }
    }

    /// P^+(n), with P^+(1) = 1. `n` must be positive.
    pub fn greatest_prime_factor(&self, n: u64) -> u64 {
        assert!(n > 0, "P+ undefined at 0");
        self.factorize(n).last().map_or(1, |&(p, _)| p)
    }

    /// Whether no k-th prime power divides `n`; 0 is never k-free.
    pub fn is_kfree(&self, n: u64, k: u32) -> bool {
        n != 0 && self.factorize(n).iter().all(|&(_, e)| e < k)
    }

    /// k-free flags over `0..=bound`.
    pub fn kfree_flags(&self, k: u32) -> Vec<bool> {
        let mut flags = vec![true; self.bound as usize + 1];
        flags[0] = false;
        for &p in &self.primes {
            let Some(pk) = (p as u64).checked_pow(k) else {
                break;
            };
            if pk > self.bound {
                break;
            }
            let mut m = pk;
            while m <= self.bound {
                flags[m as usize] = false;
                m += pk;
            }
        }
        flags
    }

    /// pi(x) for x up to the bound.
    pub fn prime_count(&self, x: u64) -> u64 {
        self.primes.partition_point(|&p| (p as u64) <= x) as u64
    }

    /// Psi(x, y) = #{1 <= m <= x : P^+(m) <= y}.
    pub fn smooth_count(&self, x: u64, y: u64) -> u64 {
        (1..=x.min(self.bound))
            .filter(|&m| self.greatest_prime_factor(m) <= y)
            .count() as u64
    }

    /// D_{1/2} = prod p^{floor(v_p(D)/2)}.
    pub fn d_half(&self, d: u64) -> u64 {
        self.factorize(d)
            .iter()
            .map(|&(p, e)| p.pow(e / 2))
            .product()
    }
}

/// Builds the sieve; alias of [`ArithCache::new`].
pub fn sieve_build(n: u64) -> Result<ArithCache> {
    ArithCache::new(n)
}

/// Numerical constants.
pub struct Constants;

impl Constants {
    pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    /// zeta(k) for integer k >= 2 by Euler-Maclaurin with 64 explicit terms.
    pub fn zeta(k: u32) -> f64 {
        assert!(k >= 2, "zeta(k) needs k >= 2");
        const N: u32 = 64;
        let s = k as f64;
        let n = N as f64;
        let head = kahan_sum((1..N).map(|j| (j as f64).powf(-s)));
        // B2/2!, B4/4!, B6/4!, B8/8! with rising factorial weights.
        let t0 = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
        let t1 = s / 12.0 * n.powf(-s - 1.0);
        let t2 = -s * (s + 1.0) * (s + 2.0) / 720.0 * n.powf(-s - 3.0);
        let t3 = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * n.powf(-s - 5.0);
        head + t0 + t1 + t2 + t3
    }

    pub fn mertens_factor() -> f64 {
        (-Self::EULER_GAMMA).exp()
    }

    /// s = 2 sum_{j in Z} exp(-2 pi^2 j^2); the dropped tail is below 1e-300.
    pub fn rademacher_s() -> f64 {
        let a = 2.0 * std::f64::consts::PI.powi(2);
        let tail = kahan_sum((1..=4).map(|j: i32| (-a * (j * j) as f64).exp()));
        2.0 * (1.0 + 2.0 * tail)
    }
}

/// Closed form of rho_k(D) = #{1 <= y <= D : D | y^2 + k y}.
///
/// Multiplicative in D. For p^r || D and v = v_p(k): the local factor is p^floor(r/2)
/// when k = 0 or v >= r/2, 2 p^v when 1 <= v < r/2, and 2 when p does not divide k.
pub fn rho_k_formula(k: u64, d: u64, cache: &ArithCache) -> Result<u64> {
    if d == 0 {
        return Err(domain("rho_k(D) needs D >= 1"));
    }
    let fac = cache.try_factorize(d)?;
    let dh: u64 = fac.iter().map(|&(p, e)| p.pow(e / 2)).product();
    if k == 0 {
        return Ok(dh);
    }
    let mut twos = 0u32;
    for &(p, r) in &fac {
        let v = if k % p == 0 { cache.valuation(k, p) } else { 0 };
        if v == 0 || (2 * v < r) {
            twos += 1;
        }
    }
    Ok((1u64 << twos) * k.gcd(&dh))
}

/// rho_k(D) by scanning y in 1..=D.
pub fn rho_k_bruteforce(k: u64, d: u64) -> Result<u64> {
    if d == 0 {
        return Err(domain("rho_k(D) needs D >= 1"));
    }
    if d > MAX_RHO_SCAN {
        return Err(capacity(format!("scan modulus {d} above {MAX_RHO_SCAN}")));
    }
    let km = k % d;
    Ok((1..=d).filter(|&y| (y * ((y + km) % d)) % d == 0).count() as u64)
}

/// sum_{[a,b] <= N} [a,b]^{-sigma}, evaluated as sum_{L <= N} d(L^2) L^{-sigma}.
pub fn lcm_power_sum(n: u64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(domain("lcm power sum needs sigma > 0"));
    }
    if n > 1_000_000 {
        return Err(capacity(format!("lcm power sum bound {n} above 1e6")));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let cache = ArithCache::new(n.max(2))?;
    Ok(kahan_sum((1..=n).map(|l| {
        let d2: u64 = cache.factorize(l).iter().map(|&(_, e)| 2 * e as u64 + 1).product();
        d2 as f64 * (l as f64).powf(-sigma)
    })))
}

/// Quadratic reference for [`lcm_power_sum`]: iterates over all pairs.
pub fn lcm_power_sum_pairs(n: u64, sigma: f64) -> f64 {
    let mut acc = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            let l = a.lcm(&b);
            if l <= n {
                acc.push((l as f64).powf(-sigma));
            }
        }
    }
    kahan_sum(acc)
}

/// f(x) = sum_{n <= T} mu(n) g(n x). The cache must reach T.
pub fn mobius_invert_truncated<G: Fn(u64) -> f64>(
    g: G,
    x: u64,
    t: u64,
    cache: &ArithCache,
) -> f64 {
    kahan_sum((1..=t).filter_map(|n| match cache.mobius(n) {
        0 => None,
        mu => Some(mu as f64 * g(n * x)),
    }))
}

/// Forward check sum_{m <= T} f(m x) of a truncated inversion.
pub fn mobius_forward<F: Fn(u64) -> f64>(f: F, x: u64, t: u64) -> f64 {
    kahan_sum((1..=t).map(|m| f(m * x)))
}

/// (Phi(n), Psi(n)): sums over d | n of log d / d and log d log log d / d.
///
/// The log log factor is taken as 0 for d <= 2.
pub fn erdos_zaremba(n: u64, cache: &ArithCache) -> (f64, f64) {
    let ds = cache.divisors(n);
    let phi = kahan_sum(ds.iter().map(|&d| (d as f64).ln() / d as f64));
    let psi = kahan_sum(ds.iter().filter(|&&d| d >= 3).map(|&d| {
        let l = (d as f64).ln();
        l * l.ln() / d as f64
    }));
    (phi, psi)
}
