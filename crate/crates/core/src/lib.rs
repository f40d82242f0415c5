//! Exact arithmetic for weight-2 q-expansions and the congruences they
//! satisfy for semistable elliptic curves.
//!
//! The crate is organised around a small pipeline:
//!
//! - [`series`]: truncated q-expansions over exact rationals or Z/rZ, with
//!   the index-mixing operators B_r, U_r, T_l acting on them.
//! - [`eisenstein`]: the weight-2 Eisenstein eigenseries of square-free
//!   level, built from the level-1 series by iterated level raising.
//! - [`curves`]: Weierstrass invariants, per-prime reduction data and
//!   Atkin-Lehner signs, point counts over F_p, and rational torsion via
//!   Lutz-Nagell.
//! - [`newform`]: the q-expansion of the newform attached to a semistable
//!   curve, generated from local data by Hecke multiplicativity.
//! - [`verify`]: the congruence and divisibility checkers tying the above
//!   together, including the special-stream level-lowering machinery and
//!   the conductor-pq torsion screen.
//! - [`corpus`]: a line-oriented curve table format plus a built-in,
//!   cross-validated dataset.
//!
//! Everything here is `no_std` + `alloc`; file handling and the CLI live in
//! the companion `eiscong-cli` crate. All coefficients are exact: rationals
//! are arbitrary-precision, residues are canonical representatives, and no
//! floating point appears anywhere.
//!
//! ```
//! use eiscong::curves::WeierstrassCurve;
//! use eiscong::verify::{verify_curve, VerifyOptions};
//!
//! // the conductor-11 curve with a rational point of order 5
//! let curve = WeierstrassCurve::from_coeffs([0, -1, 1, -10, -20])
//!     .unwrap()
//!     .with_label("11a1");
//! let report = verify_curve(&curve, &VerifyOptions::default()).unwrap();
//! assert_eq!(report.torsion.order, 5);
//! assert!(!report.any_fail());
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod corpus;
pub mod curves;
pub mod eisenstein;
pub mod newform;
pub mod series;
pub mod verify;
