//! Browser bindings for the demo page in `www/`. Everything here runs on one
//! thread.

use euler_strip::euler::{partial_product_with, ProductOptions};
use euler_strip::lfunc::l_function;
use euler_strip::rwp::rwp_series;
use euler_strip::zeros::{counting_with, PrimeSum};
use euler_strip::{character, generate_primes, ComplexPoint, DirichletCharacter};
use wasm_bindgen::prelude::*;

/// Largest N accepted from the page, to keep the tab responsive.
pub const MAX_N: usize = 200_000;

fn check_n(n: usize) -> Result<(), String> {
    if n == 0 || n > MAX_N {
        return Err(format!("N must lie in 1..={MAX_N}"));
    }
    Ok(())
}

/// `[|L(s, χ)|, |P_1|, …, |P_N|, |⟨P⟩_1|, …, |⟨P⟩_N|]`.
pub fn euler_product_series(sigma: f64, t: f64, n: usize, modulus: u64, index: u64) -> Result<Vec<f64>, String> {
    check_n(n)?;
    let s = ComplexPoint::new(sigma, t).map_err(|e| e.to_string())?;
    let chi = character(modulus, index).map_err(|e| e.to_string())?;
    let exact = l_function(s, &chi).map_err(|e| e.to_string())?.value.norm();
    let tr = partial_product_with(s, &chi, n, &ProductOptions::default()).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(1 + 2 * n);
    out.push(exact);
    out.extend(tr.partial_products.iter().map(|p| p.norm()));
    out.extend(tr.cesaro.iter().map(|p| p.norm()));
    Ok(out)
}

/// `[B_1, …, B_N]` for the trivial character.
pub fn prime_walk_series(t: f64, n: usize, u: f64, degraded: bool) -> Result<Vec<f64>, String> {
    check_n(n)?;
    let tr = rwp_series(t, &DirichletCharacter::trivial(), n, u, degraded).map_err(|e| e.to_string())?;
    Ok(tr.partials)
}

/// `[N_δ(step), N_δ(2 step), …]` up to `t_max`.
pub fn counting_series(t_max: f64, step: f64, delta: f64, primes: usize) -> Result<Vec<f64>, String> {
    check_n(primes)?;
    if !(step > 0.0) || !(t_max >= step) || t_max / step > 1e5 {
        return Err("need 0 < step ≤ t_max with at most 10^5 points".into());
    }
    let table = generate_primes(primes).map_err(|e| e.to_string())?;
    let sum = PrimeSum::new(&DirichletCharacter::trivial(), table.primes());
    let steps = (t_max / step + 1e-9).floor() as usize;
    (1..=steps)
        .map(|i| {
            counting_with(&sum, i as f64 * step, delta, sum.len())
                .map(|p| p.n_of_t)
                .map_err(|e| e.to_string())
        })
        .collect()
}

#[wasm_bindgen]
pub fn euler_product(sigma: f64, t: f64, n: usize, modulus: u64, index: u64) -> Result<Vec<f64>, JsError> {
    euler_product_series(sigma, t, n, modulus, index).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn prime_walk(t: f64, n: usize, u: f64, degraded: bool) -> Result<Vec<f64>, JsError> {
    prime_walk_series(t, n, u, degraded).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn counting(t_max: f64, step: f64, delta: f64, primes: usize) -> Result<Vec<f64>, JsError> {
    counting_series(t_max, step, delta, primes).map_err(|e| JsError::new(&e))
}
