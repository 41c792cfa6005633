//! Lexical grammars for `Time` and `Number` labeled texts.

use std::sync::LazyLock;

use chrono::{NaiveDate, NaiveTime};
use regex::Regex;

static TIME: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^(?<y>[0-9]{4})(?:(?<sep>[-.])(?<m>[0-9]{2})(?:[-.](?<d>[0-9]{2})(?:T(?<hh>[0-9]{2}):(?<mm>[0-9]{2}):(?<ss>[0-9]{2}))?)?)?$",
    )
    .unwrap()
});

static NUMBER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?$").unwrap());

/// Accepts `YYYY`, `YYYY-MM`, `YYYY-MM-DD`, `YYYY-MM-DDThh:mm:ss` and the
/// dotted `YYYY.MM.DD`. Months, days and clock fields must exist on the
/// proleptic Gregorian calendar.
pub fn is_time_literal(text: &str) -> bool {
    let Some(c) = TIME.captures(text) else {
        return false;
    };
    let num = |name: &str| c.name(name).map(|m| m.as_str().parse::<u32>().unwrap());
    let dotted = c.name("sep").is_some_and(|s| s.as_str() == ".");
    // Separators must agree: 2022.11-30 is rejected.
    if let (Some(sep), Some(_)) = (c.name("sep"), c.name("d")) {
        let bytes = text.as_bytes();
        if bytes[sep.start() + 3] != bytes[sep.start()] {
            return false;
        }
    }
    let year = num("y").unwrap() as i32;
    match (num("m"), num("d")) {
        (None, _) => true,
        // The dotted form is only defined with a day.
        (Some(_), None) if dotted => false,
        (Some(m), None) => (1..=12).contains(&m),
        (Some(m), Some(d)) => {
            if NaiveDate::from_ymd_opt(year, m, d).is_none() {
                return false;
            }
            match (num("hh"), num("mm"), num("ss")) {
                (Some(_), _, _) if dotted => false,
                (Some(h), Some(mi), Some(s)) => NaiveTime::from_hms_opt(h, mi, s).is_some(),
                _ => true,
            }
        }
    }
}

/// Optional sign, decimal integer or fraction, optional exponent.
pub fn is_number_literal(text: &str) -> bool {
    NUMBER.is_match(text)
}
