//! Ramanujan sums, Dirichlet and mixed convolutions, and the dual
//! Ramanujan-Fourier machinery: coefficient transforms, coefficient
//! recovery by divisor sums and Euler products, Dirichlet-series Euler
//! products, the two-variable extensions, and a catalog of identities with
//! truncated-sum verification reports.

pub mod arith;
pub mod bivar;
pub mod conv;
pub mod csum;
pub mod dseries;
pub mod dualseries;
pub mod error;
pub mod harness;
pub mod report;
pub mod rfseries;
pub mod summation;
pub mod value;

pub use arith::{factorize, primes_up_to, ArithmeticFn, Factorization, FnId, Param};
pub use bivar::BivariateFn;
pub use conv::Kernel2;
pub use csum::CsumTable;
pub use error::{Error, Result};
pub use report::{ConvergenceClass, Grouping, TruncatedSumReport, Verdict};
pub use value::{Value, ValueClass};
