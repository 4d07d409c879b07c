//! Name → function table behind `specfun eval`.

use anyhow::{bail, Result};
use photon_gain::{fracsum, specfun};

pub enum Value {
    Real(f64),
    Int(i128),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            // Shortest representation that round-trips, at most 17 significant digits.
            Value::Real(x) => write!(f, "{x}"),
            Value::Int(n) => write!(f, "{n}"),
        }
    }
}

/// (name, argument names, summary).
pub const FUNCTIONS: &[(&str, &str, &str)] = &[
    ("gamma", "x", "Γ(x)"),
    ("lngamma", "x", "ln|Γ(x)|"),
    ("pochhammer", "s z", "(s)_z"),
    ("rpochhammer", "s z", "1/(s)_z"),
    ("digamma", "x", "ψ(x)"),
    ("trigamma", "x", "ψ'(x)"),
    ("polygamma", "n x", "ψ⁽ⁿ⁾(x)"),
    ("hyp2f1", "a b c z", "₂F₁(a,b;c;z)"),
    ("hyp2f1_reg", "a b c z", "₂F₁(a,b;c;z)/Γ(c)"),
    ("hyp1f1", "a b z", "₁F₁(a;b;z)"),
    ("ei", "x", "exponential integral Ei(x)"),
    ("lower_gamma", "s z", "γ(s,z)"),
    ("inc_beta", "z a b", "B(z;a,b)"),
    ("reg_inc_beta", "z a b", "I_z(a,b)"),
    ("f_cdf", "x d1 d2", "CDF of F(d1,d2)"),
    ("f_quantile", "alpha d1 d2", "upper-α quantile of F(d1,d2)"),
    ("dawson", "x", "Dawson's integral"),
    ("stirling1", "n k", "signed Stirling number of the first kind"),
    ("stirling2", "n k", "Stirling number of the second kind"),
    ("norlund", "k l x", "generalized Nørlund polynomial B_k^(l)(x)"),
    ("inc_geom", "z nu", "(1 − z^ν)/(1 − z)"),
    ("inc_lerch", "z n omega nu", "incomplete Lerch transcendent Φ(z,−n,ω)_ν"),
    ("inc_hyp_sinemod", "alpha beta gamma z nu", "sine-modulated incomplete ₂F₁"),
    ("g", "n omega z nu", "G_{n,ω}(z,ν)"),
    ("eh", "n omega z nu", "Eh_{n,ω}(z,ν)"),
    ("c", "n omega nu", "C_{n,ω}(ν)"),
    ("gtilde", "n omega z nu", "normalized G̃_{n,ω}(z,ν)"),
];

fn count(name: &str, x: f64) -> Result<usize> {
    if !(x >= 0.0 && x.fract() == 0.0 && x < 1e9) {
        bail!("argument {name} must be a nonnegative integer, got {x}");
    }
    Ok(x as usize)
}

pub fn eval(name: &str, a: &[f64]) -> Result<Value> {
    let Some(&(_, arg_names, _)) = FUNCTIONS.iter().find(|f| f.0 == name) else {
        bail!("unknown function {name:?}; try `specfun list`");
    };
    let names: Vec<&str> = arg_names.split(' ').collect();
    if a.len() != names.len() {
        bail!("{name} takes {} argument(s): {arg_names}", names.len());
    }
    let r = |v: photon_gain::Result<f64>| -> Result<Value> { Ok(Value::Real(v?)) };
    match name {
        "gamma" => r(specfun::gamma(a[0])),
        "lngamma" => Ok(Value::Real(specfun::ln_gamma(a[0]))),
        "pochhammer" => r(specfun::pochhammer(a[0], a[1])),
        "rpochhammer" => r(specfun::rpochhammer(a[0], a[1])),
        "digamma" => r(specfun::digamma(a[0])),
        "trigamma" => r(specfun::trigamma(a[0])),
        "polygamma" => r(specfun::polygamma(count("n", a[0])? as u32, a[1])),
        "hyp2f1" => r(specfun::hyp2f1(a[0], a[1], a[2], a[3])),
        "hyp2f1_reg" => r(specfun::hyper::hyp2f1_reg(a[0], a[1], a[2], a[3])),
        "hyp1f1" => r(specfun::hyp1f1(a[0], a[1], a[2])),
        "ei" => r(specfun::expint_ei(a[0])),
        "lower_gamma" => r(specfun::lower_gamma(a[0], a[1])),
        "inc_beta" => r(specfun::inc_beta(a[0], a[1], a[2])),
        "reg_inc_beta" => r(specfun::reg_inc_beta(a[0], a[1], a[2])),
        "f_cdf" => r(specfun::f_cdf(a[0], a[1], a[2])),
        "f_quantile" => r(specfun::f_quantile(a[0], a[1], a[2])),
        "dawson" => Ok(Value::Real(specfun::dawson(a[0]))),
        "stirling1" => Ok(Value::Int(specfun::stirling1(count("n", a[0])?, count("k", a[1])?)?)),
        "stirling2" => Ok(Value::Int(specfun::stirling2(count("n", a[0])?, count("k", a[1])?)?)),
        "norlund" => r(specfun::norlund(count("k", a[0])?, a[1], a[2])),
        "inc_geom" => r(fracsum::inc_geom(a[0], a[1])),
        "inc_lerch" => r(fracsum::inc_lerch(a[0], count("n", a[1])?, a[2], a[3])),
        "inc_hyp_sinemod" => r(fracsum::inc_hyp_sinemod(a[0], a[1], a[2], a[3], a[4])),
        "g" => r(fracsum::g_nw(count("n", a[0])?, count("omega", a[1])?, a[2], a[3])),
        "eh" => r(fracsum::eh_nw(count("n", a[0])?, count("omega", a[1])?, a[2], a[3])),
        "c" => r(fracsum::c_nw(count("n", a[0])?, count("omega", a[1])?, a[2])),
        "gtilde" => r(fracsum::gtilde_nw(count("n", a[0])?, count("omega", a[1])?, a[2], a[3]).map(|v| v.0)),
        _ => unreachable!("table and dispatch disagree on {name}"),
    }
}
