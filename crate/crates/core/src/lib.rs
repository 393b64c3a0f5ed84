pub mod bigstep;
pub mod bigstop;
pub mod cli;
pub mod harness;
pub mod imp;
pub mod kmachine;
pub mod smallstep;
pub mod syntax;
pub mod trace;
