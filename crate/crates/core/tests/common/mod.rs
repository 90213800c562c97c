#![allow(dead_code)]

use salpeter::{Dimension, KineticForm, MomentumProfile, Problem, SeparableTerm};

pub fn exponential(v: f64, a: f64, m: f64) -> Problem {
    Problem::new(
        Dimension::OneD,
        KineticForm::salpeter(m),
        vec![SeparableTerm::symmetric(v, MomentumProfile::Exponential1D { a })],
    )
    .unwrap()
}

pub fn two_term(m: f64) -> Problem {
    Problem::new(
        Dimension::OneD,
        KineticForm::salpeter(m),
        vec![
            SeparableTerm::symmetric(1.0, MomentumProfile::Exponential1D { a: 1.0 }),
            SeparableTerm::symmetric(1.0, MomentumProfile::Exponential1D { a: 2.0 }),
        ],
    )
    .unwrap()
}

pub fn yamaguchi(v: f64, beta: f64, m: f64) -> Problem {
    Problem::new(
        Dimension::ThreeD,
        KineticForm::salpeter(m),
        vec![SeparableTerm::symmetric(v, MomentumProfile::Yamaguchi3D { beta })],
    )
    .unwrap()
}

pub fn gauss(v: f64, beta: f64, m: f64) -> Problem {
    Problem::new(
        Dimension::ThreeD,
        KineticForm::salpeter(m),
        vec![SeparableTerm::symmetric(v, MomentumProfile::Gauss3D { beta })],
    )
    .unwrap()
}

/// The six-problem regression set, all at `m = 1`.
pub fn regression_set() -> Vec<(&'static str, Problem)> {
    vec![
        ("exponential v=1", exponential(1.0, 1.0, 1.0)),
        ("exponential v=3", exponential(3.0, 1.0, 1.0)),
        ("two-term", two_term(1.0)),
        ("yamaguchi v=1", yamaguchi(1.0, 1.0, 1.0)),
        ("gauss v=0.1", gauss(0.1, 1.0, 1.0)),
        ("gauss v=1", gauss(1.0, 1.0, 1.0)),
    ]
}
