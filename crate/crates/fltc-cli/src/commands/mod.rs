pub mod axioms;
pub mod convolve;
pub mod eigen;
pub mod expand;
pub mod kernel_scan;
pub mod maximizers;
pub mod simulate;
