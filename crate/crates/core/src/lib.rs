//! Structural analysis and block-wise solving of equation systems.
//!
//! An equation system is viewed as a bipartite graph between equations and
//! unknowns. Its Dulmage–Mendelsohn decomposition splits it into
//! well-, over- and under-constrained parts, and the well-constrained core is
//! cut into irreducible blocks that can be solved one after another with an
//! interval Newton method.
//!
//! ```
//! use dmplan_core::decomposition::resolution_plan;
//! use dmplan_core::solver::execute_plan;
//! use dmplan_core::system::parse_system;
//! use dmplan_core::SolverConfig64;
//!
//! let system = parse_system("var x y\neq a: x - 1 = 0\neq b: y - 2*x = 0").unwrap();
//! let plan = resolution_plan(&system.graph().unwrap());
//! assert_eq!(plan.blocks.len(), 2);
//! let sols = execute_plan(&plan, &system, &Default::default(), &SolverConfig64::default()).unwrap();
//! assert!((sols[0].value("y").unwrap() - 2.0).abs() < 1e-9);
//! ```

pub mod decomposition;
pub mod graph;
pub mod scalar;
pub mod solver;
pub mod system;

pub use scalar::Scalar;

pub type Interval64 = system::Interval<f64>;
pub type Interval32 = system::Interval<f32>;
pub type SolverConfig64 = solver::SolverConfig<f64>;
pub type SolverConfig32 = solver::SolverConfig<f32>;
pub type BlockSolution64 = solver::BlockSolution<f64>;
pub type BlockSolution32 = solver::BlockSolution<f32>;
pub type SystemSolution64 = solver::SystemSolution<f64>;
pub type SystemSolution32 = solver::SystemSolution<f32>;
pub type Bindings64 = solver::Bindings<f64>;
pub type Bindings32 = solver::Bindings<f32>;
