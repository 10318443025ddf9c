//! Placeholder while the Gaussian half is built.
