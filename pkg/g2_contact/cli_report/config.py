from __future__ import annotations
import logging
import os
from typing import Dict, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from ..enum import DifferentiationMode, OutputFormat, Suite
from ..fields import FieldSpec, FieldSpecReader, LatticeSampling

logger = logging.getLogger(__name__)

THREADS_ENVIRONMENT_VARIABLE = "G2CONTACT_THREADS"
DIMENSION = 7

DEFAULT_TOLERANCES: Dict[str, float] = {
    "relative": 1e-8,
    "identity": 1e-8,
    "hypothesis": 1e-10,
    "axiom": 1e-10,
    "algebra": 1e-12,
    "kuo": 1e-10,
    "cosymplectic": 1e-12
}


def thread_cap() -> int:
    """
    Number of worker threads, read from G2CONTACT_THREADS. One if unset.

    Returns
    -------
    threads : int
        Thread count.
    """
    value = os.environ.get(THREADS_ENVIRONMENT_VARIABLE)
    if value is None or value == "":
        return 1

    try:
        threads = int(value)
    except ValueError:
        raise ValueError(f"{THREADS_ENVIRONMENT_VARIABLE} must be a positive integer, got {value!r}.")
    if threads < 1:
        raise ValueError(f"{THREADS_ENVIRONMENT_VARIABLE} must be a positive integer, got {value!r}.")

    return threads


def _resolve_path(config: str) -> str:
    if os.path.exists(config):
        return config
    if config in FieldSpecReader.bundled_names():
        return FieldSpecReader.bundled(config).path
    raise ValueError(f"Field-spec file not found: {config}")


class RunConfig(NamedTuple):
    """
    Everything a run needs: the fields, the sampling, the tolerances, the suites and the outputs.
    """
    spec: FieldSpec
    suites: Tuple[Suite, ...] = (Suite.ALGEBRA, Suite.CLASSIFY, Suite.THEOREMS)
    resolution: int = 8
    subsamples: Optional[int] = None
    seed: int = 0
    tolerances: Mapping[str, float] = DEFAULT_TOLERANCES
    formats: Tuple[OutputFormat, ...] = (OutputFormat.JSON,)
    out: str = "."
    mode: DifferentiationMode = DifferentiationMode.EXACT
    config_path: Optional[str] = None

    @classmethod
    def from_file(
            cls,
            config: str,
            suites: Optional[Sequence[Union[str, Suite]]] = None,
            resolution: Optional[int] = None,
            subsamples: Optional[int] = None,
            seed: Optional[int] = None,
            tol: Optional[float] = None,
            formats: Optional[Sequence[Union[str, OutputFormat]]] = None,
            out: str = ".",
            mode: Union[str, DifferentiationMode] = DifferentiationMode.EXACT
    ) -> RunConfig:
        """
        Builds a configuration from a field-spec file (a path, or the name of a bundled spec such as
        "generic_xi"). Explicit arguments override the values of the file.

        Parameters
        ----------
        config : str
            Path or bundled name of the field spec.
        suites : Optional[Sequence[Union[str, Suite]]]
            Suites to run.
        resolution : Optional[int]
            Grid resolution N.
        subsamples : Optional[int]
            Number of sampled grid points. The full grid if neither given here nor in the file.
        seed : Optional[int]
            Seed of the subsampling and of the random families.
        tol : Optional[float]
            Relative tolerance of the classification and of the theorem claims.
        formats : Optional[Sequence[Union[str, OutputFormat]]]
            Output formats.
        out : str
            Output directory.
        mode : Union[str, DifferentiationMode]
            Differentiation mode.

        Returns
        -------
        config : RunConfig
            The validated configuration.
        """
        path = _resolve_path(config)
        spec = FieldSpecReader(path).read()

        unknown = set(spec.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ValueError(f"Unknown tolerance names: {sorted(unknown)}")
        tolerances = {**DEFAULT_TOLERANCES, **{name: float(value) for name, value in spec.tolerances.items()}}
        if tol is not None:
            tolerances["relative"] = float(tol)

        def first(*values, default=None):
            return next((value for value in values if value is not None), default)

        run_config = cls(
            spec=spec,
            suites=tuple(Suite(suite) for suite in suites) if suites is not None else cls._field_defaults["suites"],
            resolution=first(resolution, spec.resolution, default=8),
            subsamples=first(subsamples, spec.subsamples),
            seed=first(seed, spec.seed, default=0),
            tolerances=tolerances,
            formats=tuple(OutputFormat(f) for f in formats) if formats is not None else (OutputFormat.JSON,),
            out=out,
            mode=DifferentiationMode(mode),
            config_path=path
        )
        run_config.validate()

        return run_config

    def validate(self):
        """
        Checks N >= 4, a subsample count within the grid, at least one suite, and the fields each suite needs.
        """
        if self.resolution < 4:
            raise ValueError(f"Resolution must be at least 4, got {self.resolution}.")
        if self.subsamples is not None and not 0 < self.subsamples <= self.resolution ** DIMENSION:
            raise ValueError(
                f"Subsample count must lie in [1, {self.resolution ** DIMENSION}], got {self.subsamples}."
            )
        if not self.suites:
            raise ValueError("At least one suite must be selected.")
        if not self.formats:
            raise ValueError("At least one output format must be selected.")
        if OutputFormat.CSV in self.formats and Suite.CLASSIFY not in self.suites:
            raise ValueError("CSV output holds the per-point table of the classify suite, which is not selected.")

        for name, value in self.tolerances.items():
            if not value > 0:
                raise ValueError(f"Tolerance '{name}' must be positive, got {value}.")

        needs_xi = {Suite.CLASSIFY, Suite.THEOREMS} & set(self.suites)
        if needs_xi and self.spec.xi is None:
            raise ValueError(f"Suites {sorted(needs_xi)} need a field 'xi' in the field spec.")
        if Suite.THREE_STRUCTURE in self.suites and (self.spec.u is None or self.spec.v is None):
            raise ValueError("Suite 'three_structure' needs fields 'u' and 'v' in the field spec.")

    @property
    def ordered_suites(self) -> Tuple[Suite, ...]:
        """
        The selected suites in execution order.
        """
        return tuple(suite for suite in Suite if suite in self.suites)

    @property
    def sampling(self) -> LatticeSampling:
        return LatticeSampling(self.resolution, self.subsamples, self.seed)

    def summary(self) -> Dict[str, object]:
        return {
            "config": None if self.config_path is None else os.path.basename(self.config_path),
            "suites": [str(suite) for suite in self.ordered_suites],
            "resolution": self.resolution,
            "subsamples": self.subsamples,
            "seed": self.seed,
            "tolerances": dict(sorted(self.tolerances.items())),
            "mode": str(self.mode)
        }
