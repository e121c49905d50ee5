//! Strict JSON experiment configs.
//!
//! ```json
//! {"model": "ccm", "n_agents": 1000, "total_money": 1000,
//!  "n_exchanges": 20000000, "seed": 1, "saving_law": {"uniform": [0, 1]}}
//! ```
//!
//! Required: `model`, `n_agents`, `total_money`, `n_exchanges`, `seed`.
//! Optional: `saving` (model `cc`, or `0` for `gibbs`), `saving_law`
//! (model `ccm`, default `{"uniform": [0, 1]}`), `burn_in` (default
//! `10·n_agents`, capped at `n_exchanges`), `measure_every` (default
//! `n_agents`), `ensemble` (default 1), `initial` (`"equal"` or
//! `"concentrated"`, default `"equal"`). Any other key is rejected.

use serde_json::{json, Map, Value};

use kinex_core::{InitialEndowment, Model, SavingLaw, SavingSpec, SimConfig};

use crate::error::ConfigError;

const KNOWN_KEYS: [&str; 11] = [
    "model",
    "n_agents",
    "total_money",
    "n_exchanges",
    "seed",
    "saving",
    "saving_law",
    "burn_in",
    "measure_every",
    "ensemble",
    "initial",
];

pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| ConfigError::Malformed(e.to_string()))?;
    config_from_value(&value)
}

pub fn config_from_value(value: &Value) -> Result<SimConfig, ConfigError> {
    let obj = value.as_object().ok_or(ConfigError::NotAnObject)?;
    if let Some(key) = obj.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(ConfigError::UnknownKey(key.clone()));
    }

    let model_name = required(obj, "model")?
        .as_str()
        .ok_or_else(|| mismatch("model", "a string"))?;
    let model =
        Model::from_name(model_name).ok_or_else(|| ConfigError::UnknownModel(model_name.into()))?;

    let n_agents = integer(required(obj, "n_agents")?, "n_agents")?;
    if n_agents < 2 {
        return Err(ConfigError::OutOfRange {
            key: "n_agents".into(),
            range: "[2, ∞)",
        });
    }
    let n_agents = usize::try_from(n_agents).map_err(|_| mismatch("n_agents", "a usize"))?;

    let total_money = number(required(obj, "total_money")?, "total_money")?;
    if !(total_money.is_finite() && total_money > 0.0) {
        return Err(ConfigError::OutOfRange {
            key: "total_money".into(),
            range: "(0, ∞)",
        });
    }
    let n_exchanges = integer(required(obj, "n_exchanges")?, "n_exchanges")?;
    let seed = integer(required(obj, "seed")?, "seed")?;

    let saving = obj.get("saving").map(|v| number(v, "saving")).transpose()?;
    if let Some(lambda) = saving {
        if !(0.0..1.0).contains(&lambda) {
            return Err(ConfigError::OutOfRange {
                key: "saving".into(),
                range: "[0,1)",
            });
        }
    }
    let law = obj.get("saving_law").map(parse_law).transpose()?;

    let spec = match model {
        Model::Gibbs | Model::Gas => {
            if law.is_some() {
                return Err(invalid("saving_law", "only valid with model ccm"));
            }
            match saving {
                Some(lambda) if lambda != 0.0 => {
                    return Err(invalid("saving", "must be 0 or absent for this model"));
                }
                _ => SavingSpec::None,
            }
        }
        Model::Cc => {
            if law.is_some() {
                return Err(invalid("saving_law", "only valid with model ccm"));
            }
            SavingSpec::Uniform(saving.ok_or(ConfigError::MissingKey("saving"))?)
        }
        Model::Ccm => {
            if saving.is_some() {
                return Err(invalid("saving", "model ccm takes saving_law instead"));
            }
            SavingSpec::Distributed(law.unwrap_or(SavingLaw::Uniform { lo: 0.0, hi: 1.0 }))
        }
    };

    let mut config = SimConfig::new(spec, n_agents, total_money, n_exchanges, seed);
    config.model = model;
    if let Some(v) = obj.get("burn_in") {
        config.burn_in = integer(v, "burn_in")?;
        if config.burn_in > n_exchanges {
            return Err(invalid("burn_in", "must not exceed n_exchanges"));
        }
    }
    if let Some(v) = obj.get("measure_every") {
        config.measure_every = integer(v, "measure_every")?;
        if config.measure_every == 0 {
            return Err(ConfigError::OutOfRange {
                key: "measure_every".into(),
                range: "[1, ∞)",
            });
        }
    }
    if let Some(v) = obj.get("ensemble") {
        let ensemble = integer(v, "ensemble")?;
        if ensemble == 0 {
            return Err(ConfigError::OutOfRange {
                key: "ensemble".into(),
                range: "[1, ∞)",
            });
        }
        config.ensemble = usize::try_from(ensemble).map_err(|_| mismatch("ensemble", "a usize"))?;
    }
    if let Some(v) = obj.get("initial") {
        config.initial = match v.as_str() {
            Some("equal") => InitialEndowment::Equal,
            Some("concentrated") if model != Model::Gas => InitialEndowment::Concentrated,
            Some("concentrated") => {
                return Err(invalid(
                    "initial",
                    "the gas always starts from equal energies",
                ))
            }
            _ => return Err(mismatch("initial", "\"equal\" or \"concentrated\"")),
        };
    }
    config.validate().map_err(|e| ConfigError::Invalid {
        key: "config".into(),
        reason: e.to_string(),
    })?;
    Ok(config)
}

/// The config in file form with every default spelled out. Parsing the
/// result gives back an identical [`SimConfig`].
pub fn config_to_value(config: &SimConfig) -> Value {
    let mut v = json!({
        "model": config.model.name(),
        "n_agents": config.n_agents,
        "total_money": config.total_money,
        "n_exchanges": config.n_exchanges,
        "seed": config.seed,
        "burn_in": config.burn_in,
        "measure_every": config.measure_every,
        "ensemble": config.ensemble,
        "initial": match config.initial {
            InitialEndowment::Equal => "equal",
            InitialEndowment::Concentrated => "concentrated",
        },
    });
    let obj = v.as_object_mut().expect("object literal");
    match config.saving {
        SavingSpec::None => {}
        SavingSpec::Uniform(lambda) => {
            obj.insert("saving".into(), json!(lambda));
        }
        SavingSpec::Distributed(SavingLaw::Uniform { lo, hi }) => {
            obj.insert("saving_law".into(), json!({ "uniform": [lo, hi] }));
        }
    }
    v
}

/// Applies a `key=value` override. The value is read as JSON when it parses
/// and as a bare string otherwise.
pub fn apply_override(config: &mut Value, assignment: &str) -> Result<(), ConfigError> {
    let (key, raw) = assignment
        .split_once('=')
        .filter(|(k, _)| !k.trim().is_empty())
        .ok_or_else(|| ConfigError::BadOverride(assignment.into()))?;
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.into()));
    config
        .as_object_mut()
        .ok_or(ConfigError::NotAnObject)?
        .insert(key.trim().to_string(), value);
    Ok(())
}

fn parse_law(v: &Value) -> Result<SavingLaw, ConfigError> {
    let expected = "an object like {\"uniform\": [lo, hi]}";
    let obj = v
        .as_object()
        .ok_or_else(|| mismatch("saving_law", expected))?;
    if obj.len() != 1 {
        return Err(mismatch("saving_law", expected));
    }
    let bounds = obj
        .get("uniform")
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| mismatch("saving_law", expected))?;
    let lo = number(&bounds[0], "saving_law")?;
    let hi = number(&bounds[1], "saving_law")?;
    let law = SavingLaw::Uniform { lo, hi };
    law.validate().map_err(|_| ConfigError::OutOfRange {
        key: "saving_law".into(),
        range: "0 <= lo < hi <= 1",
    })?;
    Ok(law)
}

fn required<'a>(obj: &'a Map<String, Value>, key: &'static str) -> Result<&'a Value, ConfigError> {
    obj.get(key).ok_or(ConfigError::MissingKey(key))
}

fn number(v: &Value, key: &str) -> Result<f64, ConfigError> {
    v.as_f64().ok_or_else(|| mismatch(key, "a number"))
}

/// Non-negative integer; integral floats such as `1e7` are accepted.
fn integer(v: &Value, key: &str) -> Result<u64, ConfigError> {
    if let Some(n) = v.as_u64() {
        return Ok(n);
    }
    match v.as_f64() {
        Some(x) if x >= 0.0 && x.fract() == 0.0 && x < u64::MAX as f64 => Ok(x as u64),
        _ => Err(mismatch(key, "a non-negative integer")),
    }
}

fn mismatch(key: &str, expected: &'static str) -> ConfigError {
    ConfigError::TypeMismatch {
        key: key.into(),
        expected,
    }
}

fn invalid(key: &str, reason: &str) -> ConfigError {
    ConfigError::Invalid {
        key: key.into(),
        reason: reason.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str =
        r#"{"model":"gibbs","n_agents":100,"total_money":1000,"n_exchanges":100000,"seed":7}"#;

    fn with(extra: &str) -> String {
        format!("{},{}", &BASE[..BASE.len() - 1], &extra[1..])
    }

    #[test]
    fn minimal_gibbs() {
        let cfg = parse_config(BASE).unwrap();
        assert_eq!(cfg.model, Model::Gibbs);
        assert_eq!(cfg.saving, SavingSpec::None);
        assert_eq!(cfg.sigma(), 10.0);
        assert_eq!(cfg.burn_in, 1000);
        assert_eq!(cfg.measure_every, 100);
        assert_eq!(cfg.ensemble, 1);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn saving_of_one_is_rejected() {
        let err = parse_config(&with(r#"{"saving":1.0}"#)).unwrap_err();
        assert_eq!(err.to_string(), "saving must lie in [0,1)");
        let err = parse_config(&with(r#"{"saving":-0.2}"#)).unwrap_err();
        assert_eq!(err.to_string(), "saving must lie in [0,1)");
    }

    #[test]
    fn ccm_saving_law() {
        let text = r#"{"model":"ccm","saving_law":{"uniform":[0,1]},"n_agents":1000,
            "total_money":1000,"n_exchanges":1000000,"seed":1}"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(
            cfg.saving,
            SavingSpec::Distributed(SavingLaw::Uniform { lo: 0.0, hi: 1.0 })
        );
        assert_eq!(cfg.model, Model::Ccm);
    }

    #[test]
    fn cc_requires_saving() {
        let text = BASE.replace("gibbs", "cc");
        assert_eq!(
            parse_config(&text).unwrap_err(),
            ConfigError::MissingKey("saving")
        );
        let cfg = parse_config(&with(r#"{"saving":0.5}"#).replace("gibbs", "cc")).unwrap();
        assert_eq!(cfg.saving, SavingSpec::Uniform(0.5));
    }

    #[test]
    fn each_required_key_is_named_when_missing() {
        for key in ["model", "n_agents", "total_money", "n_exchanges", "seed"] {
            let mut v: Value = serde_json::from_str(BASE).unwrap();
            v.as_object_mut().unwrap().remove(key);
            let err = config_from_value(&v).unwrap_err();
            assert_eq!(err, ConfigError::MissingKey(key));
            assert!(err.to_string().contains(key));
        }
    }

    #[test]
    fn type_mismatches_name_the_key() {
        for (key, bad) in [
            ("model", json!(3)),
            ("n_agents", json!("many")),
            ("total_money", json!([1])),
            ("n_exchanges", json!(1.5)),
            ("seed", json!(-1)),
            ("burn_in", json!("x")),
            ("measure_every", json!(null)),
            ("ensemble", json!(true)),
            ("initial", json!(1)),
            ("saving_law", json!([0, 1])),
        ] {
            let mut v: Value = serde_json::from_str(BASE).unwrap();
            v.as_object_mut().unwrap().insert(key.into(), bad);
            let err = config_from_value(&v).unwrap_err();
            assert!(err.to_string().contains(key), "{key}: {err}");
        }
    }

    #[test]
    fn unknown_and_misspelled_keys_rejected() {
        for key in ["n_agent", "Seed", "savings", "burnin", "extra"] {
            let mut v: Value = serde_json::from_str(BASE).unwrap();
            v.as_object_mut().unwrap().insert(key.into(), json!(1));
            let err = config_from_value(&v).unwrap_err();
            assert_eq!(err, ConfigError::UnknownKey(key.into()));
            assert!(err.to_string().contains(key));
        }
    }

    #[test]
    fn malformed_and_non_object() {
        assert!(matches!(parse_config("{"), Err(ConfigError::Malformed(_))));
        assert_eq!(parse_config("[1,2]"), Err(ConfigError::NotAnObject));
        assert_eq!(
            parse_config(&BASE.replace("gibbs", "kinetic")),
            Err(ConfigError::UnknownModel("kinetic".into()))
        );
    }

    #[test]
    fn inconsistent_keys() {
        let err = parse_config(&with(r#"{"saving":0.3}"#)).unwrap_err();
        assert!(err.to_string().contains("saving"));
        let err = parse_config(&with(r#"{"saving_law":{"uniform":[0,1]}}"#)).unwrap_err();
        assert!(err.to_string().contains("saving_law"));
        let err = parse_config(&with(r#"{"burn_in":200000}"#)).unwrap_err();
        assert!(err.to_string().contains("burn_in"));
        let err =
            parse_config(&with(r#"{"saving_law":{"uniform":[0,1.5]}}"#).replace("gibbs", "ccm"))
                .unwrap_err();
        assert!(err.to_string().contains("saving_law"));
        let err = parse_config(&with(r#"{"initial":"concentrated"}"#).replace("gibbs", "gas"))
            .unwrap_err();
        assert!(err.to_string().contains("initial"));
    }

    #[test]
    fn integral_floats_accepted() {
        let cfg = parse_config(&BASE.replace("100000", "1e5")).unwrap();
        assert_eq!(cfg.n_exchanges, 100_000);
    }

    #[test]
    fn echo_round_trips() {
        for text in [
            BASE.to_string(),
            with(r#"{"saving":0.25,"ensemble":4,"initial":"concentrated"}"#).replace("gibbs", "cc"),
            with(r#"{"saving_law":{"uniform":[0.1,0.9]},"burn_in":0}"#).replace("gibbs", "ccm"),
            BASE.replace("gibbs", "gas"),
        ] {
            let cfg = parse_config(&text).unwrap();
            let echo = config_to_value(&cfg);
            assert_eq!(config_from_value(&echo).unwrap(), cfg, "{echo}");
        }
    }

    #[test]
    fn overrides() {
        let mut v: Value = serde_json::from_str(BASE).unwrap();
        apply_override(&mut v, "saving=0.5").unwrap();
        apply_override(&mut v, "model=cc").unwrap();
        apply_override(&mut v, "n_exchanges = 2000").unwrap();
        let cfg = config_from_value(&v).unwrap();
        assert_eq!(cfg.saving, SavingSpec::Uniform(0.5));
        assert_eq!(cfg.n_exchanges, 2000);
        assert!(matches!(
            apply_override(&mut v, "novalue"),
            Err(ConfigError::BadOverride(_))
        ));
        assert!(matches!(
            apply_override(&mut v, "=3"),
            Err(ConfigError::BadOverride(_))
        ));
    }
}
