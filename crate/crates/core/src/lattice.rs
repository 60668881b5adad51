//! Sum-of-two-squares representation counts r2(n) for torus spectra.

/// r2(n) = #{(a, b) in Z^2 : a^2 + b^2 = n} by prime factorization:
/// zero when some prime 3 mod 4 divides n to an odd power, otherwise
/// 4 * prod (e_p + 1) over primes 1 mod 4.
pub fn r2(mut n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let mut count = 4u64;
    // strip factors of 2 (they never matter)
    while n % 2 == 0 {
        n /= 2;
    }
    let mut p = 3u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u64;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            match p % 4 {
                1 => count *= e + 1,
                _ => {
                    if e % 2 == 1 {
                        return 0;
                    }
                }
            }
        }
        p += 2;
    }
    if n > 1 {
        match n % 4 {
            1 => count *= 2,
            _ => return 0,
        }
    }
    count
}

/// Table of r2(0..=nmax) via a smallest-prime-factor sieve; used for bulk
/// spectrum enumeration.
pub fn r2_table(nmax: usize) -> Vec<u32> {
    let mut spf = vec![0u32; nmax + 1];
    for i in 2..=nmax {
        if spf[i] == 0 {
            let mut j = i;
            while j <= nmax {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut out = vec![0u32; nmax + 1];
    out[0] = 1;
    if nmax >= 1 {
        out[1] = 4;
    }
    for n in 2..=nmax {
        let mut m = n;
        let mut count = 4u64;
        let mut ok = true;
        while m > 1 {
            let p = spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if p == 2 {
                continue;
            }
            if p % 4 == 1 {
                count *= e + 1;
            } else if e % 2 == 1 {
                ok = false;
                break;
            }
        }
        out[n] = if ok { count as u32 } else { 0 };
    }
    out
}

/// Lattice points inside the closed disk of radius r (Gauss circle count),
/// by direct enumeration.
pub fn disk_count(r: f64) -> u64 {
    let amax = r.floor() as i64;
    let r2v = r * r;
    let mut total = 0u64;
    for a in -amax..=amax {
        let rem = r2v - (a * a) as f64;
        if rem < 0.0 {
            continue;
        }
        let bmax = rem.sqrt().floor() as i64;
        // guard against floating sqrt landing one too high
        let bmax = if ((bmax * bmax) as f64) > rem { bmax - 1 } else { bmax };
        total += (2 * bmax + 1) as u64;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2_brute(n: u64) -> u64 {
        let mut c = 0;
        let amax = (n as f64).sqrt() as i64 + 1;
        for a in -amax..=amax {
            for b in -amax..=amax {
                if (a * a + b * b) as u64 == n {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn factorization_matches_brute_force() {
        for n in 0..500u64 {
            assert_eq!(r2(n), r2_brute(n), "n = {n}");
        }
        assert_eq!(r2(25), 12);
        assert_eq!(r2(3), 0);
        assert_eq!(r2(9), 4);
    }

    #[test]
    fn table_matches_pointwise() {
        let t = r2_table(2000);
        for n in 0..=2000u64 {
            assert_eq!(t[n as usize] as u64, r2(n), "n = {n}");
        }
    }

    #[test]
    fn gauss_circle_sanity() {
        // sum of r2(n) over n <= R^2 equals the lattice count in the disk
        let t = r2_table(100 * 100);
        for r in [1u64, 7, 20, 55, 100] {
            let sum: u64 = (0..=(r * r) as usize).map(|n| t[n] as u64).sum();
            assert_eq!(sum, disk_count(r as f64), "R = {r}");
        }
    }
}
