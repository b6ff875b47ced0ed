//! Joint log posterior with exact gradients, HMC sampling, convergence
//! diagnostics, and MAP estimation.

pub mod optimize;
