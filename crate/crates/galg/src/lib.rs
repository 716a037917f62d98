//! Exact computational algebra for finite groupoids acting partially on
//! finite rings.
//!
//! The crate represents every object extensionally — groupoids by
//! composition tables, rings by dense operation tables, actions by
//! families of ideals and table-backed isomorphisms — and verifies the
//! structural theory on concrete instances by exhaustive checking:
//!
//! * validation of groupoids, rings, partial actions, and data
//!   ([`groupoid`], [`ring`], [`ideal`], [`action`]);
//! * lifting a datum to a partial groupoid action and extracting it
//!   back, base change between transversals ([`action`]);
//! * globalization of lifted actions ([`globalization`]);
//! * partial skew groupoid rings and the isomorphism with an iterated
//!   skew group ring over the pair groupoid ([`skewring`]);
//! * invariant subrings and trace maps ([`invariants`]);
//! * Morita contexts, partial Galois theory, separability and Frobenius
//!   witnesses ([`morita`]);
//! * a theorem registry with machine-readable reports ([`verify`]), a
//!   JSON instance-file layer ([`io`]), bundled instances
//!   ([`instances`]) and a seeded random-instance generator ([`fuzz`]).
//!
//! The `galg` binary exposes `validate`, `lift`, `globalize` and
//! `verify` over instance files; see the examples directory for the
//! library-level tour.

pub mod abelian;
pub mod action;
pub mod fuzz;
pub mod globalization;
pub mod groupoid;
pub mod ideal;
pub mod instances;
pub mod invariants;
pub mod io;
pub mod morita;
pub mod ring;
pub mod skewring;
pub mod tensor;
pub mod verify;

pub use action::{ActionError, Datum, PartialAction};
pub use groupoid::{FiniteGroupoid, GroupoidError, Morph, Transversal};
pub use ideal::{Ideal, RingMap};
pub use ring::{El, FiniteRing, RingError};
