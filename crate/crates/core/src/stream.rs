//! Newline-delimited CSV streams: one record per tick, one field per slot.
//!
//! Fields are rationals in any form the DSL accepts (`3`, `-0.25`, `7/3`).
//! Blank lines are records with no fields, for ticks whose input object is
//! the unit; lines starting with `#` are comments.

use crate::base::BaseTag;
use crate::caus::StatefulSeq;
use crate::dsl::{fmt_num, literal_point};
use crate::error::{Error, Result};
use crate::obj::Point;
use crate::rational::Rational;

/// Fields of each record, without checking them against any object.
pub fn parse_records(text: &str) -> Result<Vec<Vec<Rational>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .map(|(n, line)| {
            let line = line.trim();
            if line.is_empty() {
                return Ok(Vec::new());
            }
            line.split(',')
                .map(|f| {
                    f.trim().parse::<Rational>().map_err(|_| {
                        Error::Invalid(format!("line {}: `{}` is not a number", n + 1, f.trim()))
                    })
                })
                .collect()
        })
        .collect()
}

/// Records as inputs of `s`, tick by tick.
pub fn read_inputs(text: &str, s: &StatefulSeq, base: BaseTag) -> Result<Vec<Point>> {
    parse_records(text)?
        .iter()
        .enumerate()
        .map(|(k, values)| {
            let dom = s.dom_at(k)?;
            if values.len() != dom.len() {
                return Err(Error::ShapeMismatch(format!(
                    "record {} has {} fields but the input at that tick is {}",
                    k + 1,
                    values.len(),
                    dom
                )));
            }
            literal_point(values, &dom, base)
                .map_err(|e| Error::ShapeMismatch(format!("record {}: {}", k + 1, e)))
        })
        .collect()
}

pub fn format_record(p: &Point) -> String {
    let fields: Vec<String> = match p {
        Point::Rat(v) => v.iter().map(fmt_num).collect(),
        Point::Real(v) => v.iter().map(|x| x.to_string()).collect(),
        Point::Fin(v) => v.iter().map(|x| x.to_string()).collect(),
    };
    fields.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caus::run;
    use crate::dsl::load;

    const SUM: &str = "(dtr [0] R1 (comp (prod proj0 proj0) (comp dup (prim add))))";

    #[test]
    fn running_sum_over_csv() {
        let s = load(SUM, BaseTag::Poly).unwrap();
        let xs = read_inputs("1\n2\n# skipped\n3/2\n", &s, BaseTag::Poly).unwrap();
        let out: Vec<String> = run(&s, &xs).unwrap().iter().map(format_record).collect();
        assert_eq!(out, ["1", "3", "4.5"]);
    }

    #[test]
    fn wrong_width_is_a_shape_error() {
        let s = load(SUM, BaseTag::Poly).unwrap();
        assert!(matches!(
            read_inputs("1,2\n", &s, BaseTag::Poly),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            read_inputs("x\n", &s, BaseTag::Poly),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn blank_lines_are_unit_records() {
        assert_eq!(
            parse_records("\n\n1, 2\n").unwrap(),
            vec![
                vec![],
                vec![],
                vec![Rational::from_int(1), Rational::from_int(2)]
            ]
        );
    }
}
