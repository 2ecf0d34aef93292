# Wrapper functions behind the command-line subcommands

from .generate import generate_trace
from .simulate import simulate
from .compare import compare_policies
from .evaluate import evaluate_predictors
