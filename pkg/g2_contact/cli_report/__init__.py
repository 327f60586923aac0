from .cli import (
    EXIT_ASSERTION_FAILURE,
    EXIT_DEGENERATE_FIELD,
    EXIT_IO_ERROR,
    EXIT_SUCCESS,
    EXIT_USAGE_ERROR,
    main,
    parse_args
)
from .config import DEFAULT_TOLERANCES, RunConfig, thread_cap, THREADS_ENVIRONMENT_VARIABLE
from .report import Assertion, emit, Report, run
