use std::collections::BTreeMap;

use num_traits::Zero;

use crate::dga::Model;
use crate::exactla::{q, Rational};

use super::{
    cp2_model, del_pezzo_bundle_model, lens_bundle_cp2_model, q_model, s1s2_bundle_cp2_model,
    s2_cubed, s3_bundle_model, s4_model, x6_model, ConstructionError, DelPezzoParams, Result,
};

/// Optional parameters of corpus entries; each entry reads the ones it
/// understands and falls back to documented defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusParams {
    pub k: Option<i64>,
    pub l: Option<i64>,
    pub e: Option<Vec<Rational>>,
    pub epsilon: Option<Vec<Rational>>,
    pub n: Option<Rational>,
    pub f: Option<Rational>,
    pub h: Option<Rational>,
}

/// A named example model.
#[derive(Debug, Clone)]
pub struct CorpusModel {
    pub name: String,
    pub model: Model,
    pub formal_dimension: Option<u32>,
    pub parameters: BTreeMap<String, Rational>,
    pub provenance: Vec<String>,
}

const NAMES: &[&str] = &[
    "aloff-wallach",
    "berger",
    "cp2",
    "lens",
    "q",
    "q111",
    "s1s2",
    "s2-cubed",
    "s3-bundle",
    "s4",
    "sk",
    "x6",
];

pub fn corpus_names() -> &'static [&'static str] {
    NAMES
}

fn out_of_range(name: &str, value: impl ToString, reason: &str) -> ConstructionError {
    ConstructionError::ParamOutOfRange {
        name: name.into(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

fn single_e(params: &CorpusParams, default: Option<Rational>) -> Result<Rational> {
    match (&params.e, default) {
        (Some(v), _) if v.len() == 1 => Ok(v[0].clone()),
        (Some(v), _) => Err(out_of_range("e", v.len(), "expected a single value")),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(out_of_range("e", "missing", "this entry needs --e")),
    }
}

/// Builds the named corpus entry.
pub fn corpus(name: &str, params: &CorpusParams) -> Result<CorpusModel> {
    let mut parameters = BTreeMap::new();
    let (model, formal_dimension, provenance): (Model, Option<u32>, Vec<String>) = match name {
        "q111" | "q" => {
            let e = match (&params.e, name) {
                (Some(v), "q") if v.len() == 3 => [v[0].clone(), v[1].clone(), v[2].clone()],
                (Some(v), "q") => return Err(out_of_range("e", v.len(), "expected three values")),
                (Some(_), _) => return Err(out_of_range("e", "given", "q111 has fixed e = (1,1,1)")),
                (None, _) => [q(1), q(1), q(1)],
            };
            for (i, c) in e.iter().enumerate() {
                parameters.insert(format!("e{}", i + 1), c.clone());
            }
            let prov = vec![
                "circle bundle over S2 x S2 x S2 with Euler class e1*a1 + e2*a2 + e3*a3".to_string(),
                "base model: minimal model of S2 x S2 x S2, dx_i = a_i^2".to_string(),
            ];
            (Model::Free(q_model(e)), Some(7), prov)
        }
        "s2-cubed" => (
            Model::Free(s2_cubed()),
            Some(6),
            vec!["minimal model of S2 x S2 x S2".into()],
        ),
        "cp2" => (Model::Free(cp2_model()), Some(4), vec!["minimal model of CP2".into()]),
        "s4" => (Model::Free(s4_model()), Some(4), vec!["minimal model of S4".into()]),
        "sk" => {
            let k = params.k.unwrap_or(3);
            if !(3..=8).contains(&k) {
                return Err(out_of_range("k", k, "expected 3 <= k <= 8"));
            }
            let mut p = DelPezzoParams::defaults(k as usize);
            if let Some(eps) = &params.epsilon {
                p.epsilon = match eps.len() {
                    1 => vec![eps[0].clone(); k as usize],
                    _ => eps.clone(),
                };
            }
            if let Some(n) = &params.n {
                p.n = n.clone();
            }
            let model = del_pezzo_bundle_model(&p)?;
            parameters.insert("k".into(), q(k));
            parameters.insert("N".into(), p.n.clone());
            for (i, e) in p.epsilon.iter().enumerate() {
                parameters.insert(format!("epsilon{}", i + 1), e.clone());
            }
            let prov = vec![
                "circle bundle over P_k x S2, P_k = CP2 blown up at k points".to_string(),
                "base model: (H*(P_k x S2), 0) with a^2 = -a_i^2 = nu, a*a_i = a_i*a_j = 0".to_string(),
                "Euler class N*(a - sum epsilon_i*a_i + b)".to_string(),
            ];
            (Model::Tabular(model), Some(7), prov)
        }
        "berger" => {
            parameters.insert("e".into(), q(-10));
            (
                Model::Free(s3_bundle_model(&q(-10))),
                Some(7),
                vec!["Berger space as the S3-bundle over S4 with Euler class -10*a".into()],
            )
        }
        "s3-bundle" => {
            let e = single_e(params, None)?;
            parameters.insert("e".into(), e.clone());
            (
                Model::Free(s3_bundle_model(&e)),
                Some(7),
                vec!["S3-bundle over S4: Du = a^2, Db = e*a".into()],
            )
        }
        "lens" => {
            let e = single_e(params, None)?;
            parameters.insert("e".into(), e.clone());
            (
                Model::Free(lens_bundle_cp2_model(&e)),
                Some(7),
                vec!["rational S3-fibration over CP2: dx = a^3, du = e*a^2".into()],
            )
        }
        "s1s2" => {
            let e = single_e(params, Some(q(0)))?;
            let f = params.f.clone().unwrap_or_else(Rational::zero);
            let h = params.h.clone().unwrap_or_else(Rational::zero);
            let (dga, ledger) = s1s2_bundle_cp2_model(&e, &f, &h);
            parameters.insert("e".into(), e);
            parameters.insert("f".into(), f);
            parameters.insert("h".into(), h);
            parameters.insert("f_tilde".into(), ledger.f_tilde);
            parameters.insert("g".into(), ledger.g);
            (
                Model::Free(dga),
                Some(7),
                vec![
                    "S1 x S2-bundle over CP2: Db = e*a, Dc = g*a*b, Dy = c^2 + f*a^2 + h*a*c".into(),
                    "c replaced by c + h/2*a, so f becomes f_tilde = f - h^2/4".into(),
                    "g = 0 is forced by D^2(y) = 2g*a*b*c".into(),
                ],
            )
        }
        "aloff-wallach" => {
            let k = params.k.ok_or_else(|| out_of_range("k", "missing", "this entry needs --k"))?;
            let l = params.l.ok_or_else(|| out_of_range("l", "missing", "this entry needs --l"))?;
            if k == 0 && l == 0 {
                return Err(out_of_range("k, l", "0, 0", "k and l must not both vanish"));
            }
            parameters.insert("k".into(), q(k));
            parameters.insert("l".into(), q(l));
            let mut prov = vec![format!(
                "W_{{{k},{l}}}: circle bundle over SU(3)/T^2 with Euler class {k}*a + {l}*b"
            )];
            let model = if k + l != 0 {
                let p = (k + l).abs();
                parameters.insert("p".into(), q(p));
                prov.push(format!(
                    "fibration S3/Z_{p} -> W -> CP2; rational model dx = a^3, du = e*a^2 with e = k + l"
                ));
                lens_bundle_cp2_model(&q(k + l))
            } else {
                prov.push(
                    "fibration S1 x S2 -> W -> CP2 with Db = k*a, f = h = 0".into(),
                );
                s1s2_bundle_cp2_model(&q(k), &q(0), &q(0)).0
            };
            (Model::Free(model), Some(7), prov)
        }
        "x6" => {
            let f = params.f.clone().unwrap_or_else(|| q(1));
            parameters.insert("f".into(), f.clone());
            (
                Model::Free(x6_model(&f)),
                Some(6),
                vec!["S2-bundle over CP2: dx = a^3, dy = c^2 + f*a^2".into()],
            )
        }
        other => return Err(ConstructionError::UnknownCorpusEntry(other.to_string())),
    };
    Ok(CorpusModel {
        name: name.to_string(),
        model,
        formal_dimension,
        parameters,
        provenance,
    })
}
