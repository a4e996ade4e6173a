use serde::{Deserialize, Serialize};

use super::{elem_eval, field_op, ArithOp, Budget, ElemFn, ExactReal};
use crate::catalog::MapDesc;
use crate::decompose;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::liouville::{self, DigitRule, Schedule};
use crate::poly::BivarPolyQ;
use crate::rational::{self, Rational};
use crate::steer;

/// Which member of a constructed pair a recipe refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Part {
    Xi,
    Eta,
}

/// Exact data from which a value can be rebuilt deterministically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Recipe {
    Rational {
        #[serde(with = "rational::serde_str")]
        value: Rational,
    },
    Series {
        base: u32,
        schedule: Schedule,
        digits: DigitRule,
    },
    SplitSum {
        target: Box<Recipe>,
        part: Part,
    },
    SplitProd {
        target: Box<Recipe>,
        level: u32,
        part: Part,
    },
    /// `image` 0 is the steered point itself, `i >= 1` is `maps[i-1]` applied to it.
    Steered {
        maps: Vec<MapDesc>,
        interval: Interval,
        level: u32,
        image: usize,
    },
    Implicit {
        poly: String,
        x_interval: Interval,
        y_interval: Interval,
        level: u32,
        part: Part,
    },
    Orbit {
        map: Box<MapDesc>,
        depth: u32,
        level: u32,
        interval: Interval,
        iterate: i64,
    },
    DerivedArith {
        op: ArithOp,
        lhs: Box<Recipe>,
        rhs: Box<Recipe>,
    },
    Elementary {
        func: ElemFn,
        arg: Box<Recipe>,
        #[serde(
            default,
            skip_serializing_if = "Option::is_none",
            with = "rational::serde_str_opt"
        )]
        param: Option<Rational>,
    },
}

impl Recipe {
    /// Rebuilds the value. Constructions are rerun from scratch.
    pub fn realize(&self) -> Result<ExactReal> {
        match self {
            Recipe::Rational { value } => Ok(ExactReal::from_rational(value.clone())),
            Recipe::Series {
                base,
                schedule,
                digits,
            } => liouville::series_constant(*base, schedule.clone(), digits.clone()),
            Recipe::SplitSum { target, part } => {
                let t = target.realize()?;
                let (xi, eta) = decompose::split_sum_parts(&t)?;
                Ok(pick(*part, xi, eta))
            }
            Recipe::SplitProd {
                target,
                level,
                part,
            } => {
                let t = target.realize()?;
                let s = decompose::erdos_split_prod(&t, *level)?;
                Ok(pick(*part, s.xi, s.eta))
            }
            Recipe::Steered {
                maps,
                interval,
                level,
                image,
            } => {
                let built = maps
                    .iter()
                    .map(MapDesc::build)
                    .collect::<Result<Vec<_>>>()?;
                let run = steer::steer(&built, interval, *level)?;
                run.images.get(*image).cloned().ok_or_else(|| {
                    Error::InvalidArgument(format!("no image {image} in steered recipe"))
                })
            }
            Recipe::Implicit {
                poly,
                x_interval,
                y_interval,
                level,
                part,
            } => {
                let p = BivarPolyQ::parse(poly)?;
                let s = decompose::implicit_pair(&p, x_interval, y_interval, *level)?;
                Ok(pick(*part, s.xi, s.eta))
            }
            Recipe::Orbit {
                map,
                depth,
                level,
                interval,
                iterate,
            } => {
                let phi = map.build()?;
                let o = decompose::orbit_construct_on(&phi, *depth, *level, interval)?;
                o.element(*iterate).cloned().ok_or_else(|| {
                    Error::InvalidArgument(format!("iterate {iterate} outside orbit depth {depth}"))
                })
            }
            Recipe::DerivedArith { op, lhs, rhs } => field_op(
                *op,
                &lhs.realize()?,
                &rhs.realize()?,
                Budget::default().separation,
            ),
            Recipe::Elementary { func, arg, param } => {
                elem_eval(*func, &arg.realize()?, param.as_ref())
            }
        }
    }
}

fn pick(part: Part, xi: ExactReal, eta: ExactReal) -> ExactReal {
    match part {
        Part::Xi => xi,
        Part::Eta => eta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn json_round_trip() {
        let r = Recipe::Elementary {
            func: ElemFn::PowRational,
            arg: Box::new(Recipe::Rational { value: rat(2, 1) }),
            param: Some(rat(1, 3)),
        };
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"kind\":\"elementary\""));
        assert!(s.contains("\"param\":\"1/3\""));
        let back: Recipe = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn realize_matches_original() {
        let x = ExactReal::from_int(2)
            .sqrt()
            .unwrap()
            .add_rational(&rat(1, 3));
        let y = x.recipe().unwrap().realize().unwrap();
        for k in [0, 20, 90] {
            assert_eq!(x.refine(k), y.refine(k));
        }
    }
}
