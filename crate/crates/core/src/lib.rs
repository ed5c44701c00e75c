//! Simulation of classical-quantum circuits, quantum homomorphic encryption
//! with Pauli key tracking, and Szegedy walk circuits with a dense reference
//! implementation.

pub mod cqsim;
pub mod qhe;
pub mod oracle;
pub mod szegedy;
