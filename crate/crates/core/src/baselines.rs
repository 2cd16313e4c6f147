//! The two reference matchers gambit is compared against: exact name or
//! email-base equality ("Simple") and Bird et al.'s six conditions.

use crate::normalize::Alias;
use crate::rules::MatcherConfig;

/// Matches on equal names or equal email bases. Only `cfg.min_len` is used.
pub fn simple_match(i: &Alias, j: &Alias, cfg: &MatcherConfig) -> bool {
    cfg.gated_eq(&i.name, &j.name) || cfg.gated_eq(&i.email_base, &j.email_base)
}

/// Largest of Bird et al.'s conditions, with the boolean ones counted as 1.
/// The pair matches when this reaches the threshold.
pub fn bird_score(i: &Alias, j: &Alias, cfg: &MatcherConfig) -> f64 {
    let either =
        |rule: fn(&MatcherConfig, &Alias, &Alias) -> bool| rule(cfg, i, j) || rule(cfg, j, i);
    if either(MatcherConfig::names_in)
        || either(MatcherConfig::initial_last_in)
        || either(MatcherConfig::first_initial_in)
    {
        return 1.0;
    }
    let names = cfg.gated_sim(&i.name, &j.name);
    let parts = cfg
        .gated_sim(&i.first_name, &j.first_name)
        .min(cfg.gated_sim(&i.last_name, &j.last_name));
    let bases = cfg.gated_sim(&i.email_base, &j.email_base);
    names.max(parts).max(bases)
}

pub fn bird_match(i: &Alias, j: &Alias, cfg: &MatcherConfig) -> bool {
    bird_score(i, j, cfg) >= cfg.threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::extract_entities;
    use crate::similarity::Measure;

    fn alias(name: &str, email_base: &str) -> Alias {
        extract_entities(name.into(), format!("{email_base}@host org"), "x".into())
    }

    fn cfg(t: f64) -> MatcherConfig {
        MatcherConfig::new(t, Measure::Levenshtein, 3).unwrap()
    }

    #[test]
    fn simple_on_equal_name() {
        assert!(simple_match(
            &alias("john doe", "jdoe"),
            &alias("john doe", "other"),
            &cfg(0.95)
        ));
    }

    #[test]
    fn simple_on_equal_email_base() {
        assert!(simple_match(
            &alias("a b", "jdoe"),
            &alias("c d", "jdoe"),
            &cfg(0.95)
        ));
    }

    #[test]
    fn simple_rejects_unrelated() {
        assert!(!simple_match(
            &alias("john doe", "jdoe"),
            &alias("jane roe", "jroe"),
            &cfg(0.95)
        ));
    }

    #[test]
    fn simple_respects_length_gate() {
        assert!(!simple_match(
            &alias("", "al"),
            &alias("", "al"),
            &cfg(0.95)
        ));
    }

    #[test]
    fn bird_initial_plus_last_name() {
        let i = alias("christian bird", "cbird");
        let j = alias("chris bird", "bird");
        assert!(MatcherConfig::initial_last_in(&cfg(0.95), &j, &i));
        assert!(bird_match(&i, &j, &cfg(0.95)));
        assert!(bird_match(&j, &i, &cfg(1.0)));
    }

    #[test]
    fn bird_identical() {
        let a = alias("john doe", "jdoe");
        assert!(bird_match(&a, &a, &cfg(1.0)));
    }

    #[test]
    fn bird_rejects_dissimilar() {
        // sim(N) = 0.5, FN "john"/"mary" = 0, EB "jdoe"/"mpoe" = 0.5; no substring hits.
        let i = alias("john doe", "jdoe");
        let j = alias("mary poe", "mpoe");
        assert!((bird_score(&i, &j, &cfg(0.95)) - 0.5).abs() < 1e-12);
        assert!(!bird_match(&i, &j, &cfg(0.95)));
    }
}
