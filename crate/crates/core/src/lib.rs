//! Mode-locked periodic orbits of three-dimensional maps: location,
//! continuation, bifurcation detection, unstable-manifold growth and
//! classification of the invariant curves they form.

pub mod continuation;
pub mod cycles;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod linalg;
pub mod manifold;
pub mod maps;

pub use continuation::{
    continue_cycle, detect_bifurcations, pair_eigenvalues, BifurcationEvent, BranchRecord, ContinuationBranch,
    ContinuationOptions, EventKind, Pairing, Termination,
};
pub use cycles::{
    classify_cycle, cycle_multipliers, find_cycle, find_saddle_between, seed_cycles_from_orbit, solve_cycle, Cycle,
    CycleClass, CycleTag, EigenTriple, NewtonOptions, Roles,
};
pub use dynamics::{
    bifurcation_scan, count_cyclic_loops, iterate_orbit, max_lyapunov, LoopCensus, OrbitSample, ScanDataset,
    SeedPolicy, Verdict,
};
pub use error::{Error, Result};
pub use linalg::{Matrix3, State3};
pub use manifold::{
    classify_connection, grow_branches, grow_unstable_manifold, predict_doubling_type, BranchId, ConnectionReport,
    Direction, DoublingPrediction, DoublingType, ManifoldCurve, ManifoldSettings, Terminal, Topology,
};
pub use maps::{eval_jacobian, eval_map, lookup, orientation_class, registry, BoundMap, MapDef, MapKind, Orientation, ParamSet};
