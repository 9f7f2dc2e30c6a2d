//! Dense polynomials over the prime field F_p, used for field moduli:
//! irreducibility testing and deterministic irreducible search.
//!
//! Coefficients are ascending-degree `u32` values reduced mod p.

pub fn normalize(mut c: Vec<u32>) -> Vec<u32> {
    while c.last() == Some(&0) {
        c.pop();
    }
    c
}

pub fn deg(c: &[u32]) -> Option<usize> {
    if c.is_empty() {
        None
    } else {
        Some(c.len() - 1)
    }
}

pub fn add(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = *a.get(i).unwrap_or(&0);
        let y = *b.get(i).unwrap_or(&0);
        *o = (x + y) % p;
    }
    normalize(out)
}

pub fn sub(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = *a.get(i).unwrap_or(&0);
        let y = *b.get(i).unwrap_or(&0);
        *o = (x + p - y) % p;
    }
    normalize(out)
}

pub fn mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    normalize(out.into_iter().map(|v| v as u32).collect())
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub fn rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    assert!(!m.is_empty(), "modulus must be nonzero");
    assert_eq!(*m.last().unwrap(), 1, "modulus must be monic");
    if m.len() == 1 {
        return vec![];
    }
    let dm = m.len() - 1;
    let mut r: Vec<u32> = a.to_vec();
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (j, &mj) in m.iter().enumerate() {
                let idx = shift + j;
                r[idx] = ((r[idx] as u64 + (p as u64 - lead as u64) * mj as u64) % p as u64) as u32;
            }
        }
        r.pop();
        r = normalize(r);
        if r.is_empty() {
            break;
        }
    }
    normalize(r)
}

pub fn mulmod(p: u32, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    rem(p, &mul(p, a, b), m)
}

/// x^e mod m by square and multiply, for e given in base-p-free u64 form.
pub fn powmod_x(p: u32, mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut base = normalize(vec![0, 1]);
    base = rem(p, &base, m);
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(p, &acc, &base, m);
        }
        base = mulmod(p, &base, &base, m);
        e >>= 1;
    }
    acc
}

pub fn gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = normalize(a.to_vec());
    let mut b = normalize(b.to_vec());
    while !b.is_empty() {
        let lb = *b.last().unwrap();
        let linv = inv_mod_p(p, lb);
        let monic: Vec<u32> = b
            .iter()
            .map(|&c| ((c as u64 * linv as u64) % p as u64) as u32)
            .collect();
        let r = rem(p, &a, &monic);
        a = b;
        b = r;
    }
    a
}

pub fn inv_mod_p(p: u32, a: u32) -> u32 {
    // p is small and prime; brute force is fine and obviously correct.
    assert!(a % p != 0);
    for x in 1..p {
        if (a as u64 * x as u64) % p as u64 == 1 {
            return x;
        }
    }
    unreachable!("p must be prime")
}

/// Irreducibility over F_p of a monic polynomial of degree >= 1, by the
/// q-power test: f is irreducible of degree n iff x^{p^n} = x mod f and
/// gcd(x^{p^{n/l}} - x, f) = 1 for every prime l | n.
pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let f = normalize(f.to_vec());
    if f.len() < 2 || *f.last().unwrap() != 1 {
        return false;
    }
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    // x^{p^n} mod f via n successive p-th powers.
    let mut xp = powmod_x(p, p as u64, &f);
    let mut powers = vec![xp.clone()]; // powers[i] = x^{p^{i+1}} mod f
    for _ in 1..n {
        xp = pow_poly_mod(p, &xp, p as u64, &f);
        powers.push(xp.clone());
    }
    let x = rem(p, &[0, 1], &f);
    if powers[n - 1] != x {
        return false;
    }
    for l in prime_divisors(n) {
        let k = n / l;
        let diff = sub(p, &powers[k - 1], &x);
        let g = gcd(p, &f, &diff);
        if deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

fn pow_poly_mod(p: u32, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut base = base.to_vec();
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(p, &acc, &base, m);
        }
        base = mulmod(p, &base, &base, m);
        e >>= 1;
    }
    acc
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The lexicographically first monic irreducible polynomial of degree n
/// over F_p. Lex order compares coefficient vectors (c_0, ..., c_{n-1})
/// ascending, so the result is reproducible across runs.
pub fn first_irreducible(p: u32, n: usize) -> Vec<u32> {
    assert!(n >= 1);
    let mut coeffs = vec![0u32; n];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
        // increment base-p counter
        let mut i = 0;
        loop {
            assert!(i < n, "no irreducible of degree {} found", n);
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
