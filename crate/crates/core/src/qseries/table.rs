//! Exact Fourier coefficients of j.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use rug::integer::Order;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};

/// Largest table the library will build on its own.
pub const MAX_TERMS: usize = 8192;

/// Size of the table built on first use of the shared instance.
pub const DEFAULT_TERMS: usize = 160;

/// Environment variable naming a directory for the on-disk table cache.
pub const CACHE_DIR_ENV: &str = "MODJET_CACHE_DIR";

const MAGIC: &[u8; 4] = b"JTAB";
const FORMAT_VERSION: u32 = 1;
const CACHE_FILE: &str = "jtable-v1.bin";

/// a_1..a_K of j = 1/q + 744 + sum a_k q^k.
pub struct FourierTable {
    coeffs: Vec<Integer>,
    ln_coeffs: Vec<f64>,
    floats: Mutex<HashMap<u32, Arc<Vec<Float>>>>,
}

impl std::fmt::Debug for FourierTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierTable").field("len", &self.coeffs.len()).finish()
    }
}

impl FourierTable {
    /// Builds a_1..a_k along two independent routes and checks they agree.
    pub fn build(k: usize) -> Result<Self> {
        Self::build_limited(k, MAX_TERMS)
    }

    pub fn build_limited(k: usize, max: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("table size must be at least 1".into()));
        }
        if k > max {
            return Err(Error::ResourceLimit { what: "Fourier terms", requested: k, max });
        }
        let a = via_delta_product(k);
        let b = via_eisenstein_quotient(k)?;
        if a != b {
            let at = a.iter().zip(&b).position(|(x, y)| x != y).unwrap_or(0) + 1;
            return Err(Error::Internal(format!("coefficient routes disagree at a_{at}")));
        }
        Self::from_coeffs(a)
    }

    fn from_coeffs(coeffs: Vec<Integer>) -> Result<Self> {
        if let Some(k) = coeffs.iter().position(|c| *c <= 0) {
            return Err(Error::Internal(format!("a_{} is not positive", k + 1)));
        }
        let ln_coeffs = coeffs.iter().map(ln_integer).collect();
        Ok(FourierTable { coeffs, ln_coeffs, floats: Mutex::new(HashMap::new()) })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of q^k for -1 <= k <= len.
    pub fn coeff(&self, k: i64) -> Integer {
        match k {
            -1 => Integer::from(1),
            0 => Integer::from(744),
            k if k >= 1 && (k as usize) <= self.coeffs.len() => self.coeffs[k as usize - 1].clone(),
            _ => Integer::new(),
        }
    }

    /// a_1..a_K.
    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// ln a_k for k >= 1.
    pub fn ln_coeff(&self, k: usize) -> f64 {
        self.ln_coeffs[k - 1]
    }

    /// a_1..a_K rounded to `prec` bits, cached per precision.
    pub fn floats(&self, prec: u32) -> Arc<Vec<Float>> {
        let mut cache = self.floats.lock().expect("float cache poisoned");
        cache
            .entry(prec)
            .or_insert_with(|| Arc::new(self.coeffs.iter().map(|c| Float::with_val(prec, c)).collect()))
            .clone()
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.coeffs.len() as u64).to_le_bytes())?;
        for c in &self.coeffs {
            let bytes = signed_le_bytes(c);
            w.write_all(&(bytes.len() as u32).to_le_bytes())?;
            w.write_all(&bytes)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::CorruptCache("bad magic".into()));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let version = u32::from_le_bytes(b4);
        if version != FORMAT_VERSION {
            return Err(Error::CorruptCache(format!("unsupported version {version}")));
        }
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let n = u64::from_le_bytes(b8) as usize;
        if n == 0 || n > MAX_TERMS {
            return Err(Error::CorruptCache(format!("implausible length {n}")));
        }
        let mut coeffs = Vec::with_capacity(n);
        for _ in 0..n {
            r.read_exact(&mut b4)?;
            let len = u32::from_le_bytes(b4) as usize;
            if len > 1 << 16 {
                return Err(Error::CorruptCache(format!("implausible coefficient length {len}")));
            }
            let mut buf = vec![0u8; len];
            r.read_exact(&mut buf)?;
            coeffs.push(from_signed_le_bytes(&buf));
        }
        let table = Self::from_coeffs(coeffs).map_err(|e| Error::CorruptCache(e.to_string()))?;
        table.spot_check()?;
        Ok(table)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let f = std::fs::File::create(&tmp)?;
            self.write_to(std::io::BufWriter::new(f))?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(f))
    }

    /// Recomputes a short prefix and compares, so a damaged cache is caught.
    fn spot_check(&self) -> Result<()> {
        let n = self.coeffs.len().min(24);
        if via_delta_product(n)[..] != self.coeffs[..n] {
            return Err(Error::CorruptCache("prefix does not match recomputation".into()));
        }
        Ok(())
    }
}

static SHARED: OnceLock<Mutex<Arc<FourierTable>>> = OnceLock::new();

/// A process-wide table with at least `k` terms. Grows on demand and is
/// otherwise shared read-only.
pub fn shared(k: usize) -> Result<Arc<FourierTable>> {
    let cell = SHARED.get_or_init(|| Mutex::new(Arc::new(initial_table())));
    let mut guard = cell.lock().expect("shared table poisoned");
    if guard.len() >= k {
        return Ok(guard.clone());
    }
    if k > MAX_TERMS {
        return Err(Error::ResourceLimit { what: "Fourier terms", requested: k, max: MAX_TERMS });
    }
    let target = k.max(guard.len() * 2).min(MAX_TERMS);
    let table = match cached_table(target) {
        Some(t) => t,
        None => {
            let t = FourierTable::build(target)?;
            if let Some(path) = cache_path() {
                let _ = t.save(&path);
            }
            t
        }
    };
    *guard = Arc::new(table);
    Ok(guard.clone())
}

fn initial_table() -> FourierTable {
    cached_table(DEFAULT_TERMS).unwrap_or_else(|| {
        let t = FourierTable::build(DEFAULT_TERMS).expect("default table builds");
        if let Some(path) = cache_path() {
            let _ = t.save(&path);
        }
        t
    })
}

fn cache_path() -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_DIR_ENV)?;
    let dir = PathBuf::from(dir);
    std::fs::create_dir_all(&dir).ok()?;
    Some(dir.join(CACHE_FILE))
}

fn cached_table(min_len: usize) -> Option<FourierTable> {
    let t = FourierTable::load(&cache_path()?).ok()?;
    (t.len() >= min_len).then_some(t)
}

fn ln_integer(c: &Integer) -> f64 {
    let (m, e) = c.to_f64_exp();
    m.abs().ln() + e as f64 * std::f64::consts::LN_2
}

fn signed_le_bytes(c: &Integer) -> Vec<u8> {
    let mag: Vec<u8> = c.to_digits(Order::Lsf);
    if *c >= 0 {
        let mut v = mag;
        if v.last().is_some_and(|b| b & 0x80 != 0) {
            v.push(0);
        }
        v
    } else {
        let bits = (mag.len() * 8) as u32 + 8;
        let modulus = Integer::from(1) << bits;
        let tc: Integer = modulus + c;
        let mut v: Vec<u8> = tc.to_digits(Order::Lsf);
        v.resize(mag.len() + 1, 0);
        v
    }
}

fn from_signed_le_bytes(b: &[u8]) -> Integer {
    let v = Integer::from_digits(b, Order::Lsf);
    if b.last().is_some_and(|x| x & 0x80 != 0) {
        v - (Integer::from(1) << (b.len() as u32 * 8))
    } else {
        v
    }
}

// --- exact power series over Z, truncated to a fixed length ---

fn mul_trunc(a: &[Integer], b: &[Integer], n: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a series with constant term 1.
fn inv_trunc(a: &[Integer], n: usize) -> Vec<Integer> {
    debug_assert_eq!(a[0], 1);
    let mut b = vec![Integer::new(); n];
    b[0] = Integer::from(1);
    for k in 1..n {
        let mut s = Integer::new();
        for i in 1..=k.min(a.len() - 1) {
            s += &a[i] * &b[k - i];
        }
        b[k] = -s;
    }
    b
}

fn divisor_power_sums(n: usize, r: u32) -> Vec<Integer> {
    let mut s = vec![Integer::new(); n];
    for d in 1..n {
        let p: Integer = Integer::from(d).pow(r);
        let mut m = d;
        while m < n {
            s[m] += &p;
            m += d;
        }
    }
    s
}

fn eisenstein(n: usize, r: u32, scale: i64) -> Vec<Integer> {
    let mut e = divisor_power_sums(n, r);
    for c in e.iter_mut() {
        *c *= scale;
    }
    e[0] = Integer::from(1);
    e
}

/// prod (1 - q^n) via Euler's pentagonal number theorem.
fn euler_product(n: usize) -> Vec<Integer> {
    let mut p = vec![Integer::new(); n];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in [k, -k] {
            let g = kk * (3 * kk - 1) / 2;
            if (g as usize) < n {
                p[g as usize] = Integer::from(if kk.rem_euclid(2) == 0 { 1 } else { -1 });
                any = true;
            }
            if k == 0 {
                break;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    p
}

/// j*q = E4^3 / prod(1-q^n)^24.
fn via_delta_product(k: usize) -> Vec<Integer> {
    let n = k + 2;
    let e4 = eisenstein(n, 3, 240);
    let e4c = mul_trunc(&mul_trunc(&e4, &e4, n), &e4, n);
    let p1 = euler_product(n);
    let p2 = mul_trunc(&p1, &p1, n);
    let p4 = mul_trunc(&p2, &p2, n);
    let p8 = mul_trunc(&p4, &p4, n);
    let p16 = mul_trunc(&p8, &p8, n);
    let p24 = mul_trunc(&p16, &p8, n);
    let jq = mul_trunc(&e4c, &inv_trunc(&p24, n), n);
    jq[2..].to_vec()
}

/// (j - 1728)*q = E6^2 / ((E4^3 - E6^2) / (1728 q)).
fn via_eisenstein_quotient(k: usize) -> Result<Vec<Integer>> {
    let n = k + 3;
    let e4 = eisenstein(n, 3, 240);
    let e6 = eisenstein(n, 5, -504);
    let e4c = mul_trunc(&mul_trunc(&e4, &e4, n), &e4, n);
    let e6s = mul_trunc(&e6, &e6, n);
    let mut d = Vec::with_capacity(n - 1);
    for i in 1..n {
        let diff = Integer::from(&e4c[i] - &e6s[i]);
        if !diff.is_divisible_u(1728) {
            return Err(Error::Internal("E4^3 - E6^2 not divisible by 1728".into()));
        }
        d.push(diff / 1728u32);
    }
    if d[0] != 1 {
        return Err(Error::Internal("discriminant does not start with q".into()));
    }
    let m = k + 2;
    let jq = mul_trunc(&e6s, &inv_trunc(&d, m), m);
    if jq[0] != 1 || jq[1] != -984 {
        return Err(Error::Internal("unexpected leading terms of j - 1728".into()));
    }
    Ok(jq[2..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_coefficients() {
        let t = FourierTable::build(4).unwrap();
        assert_eq!(t.coeff(-1), 1);
        assert_eq!(t.coeff(0), 744);
        assert_eq!(t.coeff(1), 196884);
        assert_eq!(t.coeff(2), 21493760);
        assert_eq!(t.coeff(3), 864299970);
        assert_eq!(t.coeff(4), Integer::from(20245856256u64));
    }

    #[test]
    fn rejects_empty_and_oversized() {
        assert!(FourierTable::build(0).is_err());
        assert!(matches!(FourierTable::build_limited(50, 10), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn signed_bytes_round_trip() {
        for v in [0i64, 1, -1, 127, 128, -128, -129, 255, 65535, -65536, i64::MAX, i64::MIN] {
            let i = Integer::from(v);
            assert_eq!(from_signed_le_bytes(&signed_le_bytes(&i)), i, "{v}");
        }
        let big = Integer::from(3).pow(200);
        assert_eq!(from_signed_le_bytes(&signed_le_bytes(&big)), big);
        let neg = -big;
        assert_eq!(from_signed_le_bytes(&signed_le_bytes(&neg)), neg);
    }

    #[test]
    fn cache_round_trip() {
        let t = FourierTable::build(40).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let u = FourierTable::read_from(&buf[..]).unwrap();
        assert_eq!(t.coeffs(), u.coeffs());
        buf[0] = b'X';
        assert!(FourierTable::read_from(&buf[..]).is_err());
    }
}
