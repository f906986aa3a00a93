//! Classifiers: the pair-feature model and its reference baselines.

mod classifier;
mod elm;
mod hyperplane;
mod knn;
mod vsc;

pub use classifier::{sign, Classifier, ConstantClassifier};
pub use elm::{fit_elm, ElmModel};
pub use hyperplane::{Hyperplane, Pair, PAIR_SEPARATION_TOL};
pub use knn::{fit_knn, KnnModel};
pub use vsc::{
    feature_row, sample_pairs, sample_pairs_uniform, PairMode, VscConfig, VscModel,
    MAX_PAIR_ATTEMPTS,
};
