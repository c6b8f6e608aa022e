"""From-scratch trainable models: feed-forward ranker, hard-sharing
multi-task network, bi-LSTM evidence encoder stack, and an SMO-trained
RBF-kernel SVM."""

from .ffnn import FfnnConfig, FfnnModel, train_ffnn
from .multitask import MultiTaskConfig, MultiTaskModel, train_multitask, variant
from .bilstm import (
    BilstmExample,
    BilstmStackConfig,
    BilstmStackModel,
    embed_sequence,
    train_bilstm_stack,
)
from .svm import SvmModel, train_svm_rbf, grid_search_svm, OneVsRestSvm

__all__ = [
    "FfnnConfig", "FfnnModel", "train_ffnn",
    "MultiTaskConfig", "MultiTaskModel", "train_multitask", "variant",
    "BilstmExample", "BilstmStackConfig", "BilstmStackModel",
    "embed_sequence", "train_bilstm_stack",
    "SvmModel", "train_svm_rbf", "grid_search_svm", "OneVsRestSvm",
]
