//! Discrete norms with respect to the boundary quadrature measure.

/// Strong L^p norm; `p = f64::INFINITY` gives the maximum of |values|.
pub fn lp_norm(values: &[f64], weights: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    let s: f64 = values.iter().zip(weights).map(|(v, w)| w * v.abs().powf(p)).sum();
    s.powf(1.0 / p)
}

/// Weak L^p quasinorm (sup_λ λ^p σ(|f| ≥ λ))^{1/p}.
///
/// For a step distribution the supremum over λ is attained at a sample value,
/// so the sweep runs over the sorted distinct |values|. `p = f64::INFINITY`
/// gives the plain supremum.
pub fn weak_lp_quasinorm(values: &[f64], weights: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return lp_norm(values, weights, p);
    }
    let mut pairs: Vec<(f64, f64)> = values.iter().zip(weights).map(|(v, w)| (v.abs(), *w)).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = 0.0f64;
    let mut mass = 0.0;
    let mut i = 0;
    while i < pairs.len() {
        let level = pairs[i].0;
        while i < pairs.len() && pairs[i].0 == level {
            mass += pairs[i].1;
            i += 1;
        }
        best = best.max(level.powf(p) * mass);
    }
    best.powf(1.0 / p)
}
