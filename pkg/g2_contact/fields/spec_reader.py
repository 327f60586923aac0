import json
import logging
import os
import tomllib
from typing import Any, Dict, List, Mapping, NamedTuple, Optional

from .base import TrigVectorField

logger = logging.getLogger(__name__)

BUNDLED_SPECS_FOLDER_PATH = os.path.join(os.path.dirname(__file__), "field_specs")


class FieldSpec(NamedTuple):
    xi: Optional[TrigVectorField] = None
    u: Optional[TrigVectorField] = None
    v: Optional[TrigVectorField] = None
    resolution: Optional[int] = None
    subsamples: Optional[int] = None
    seed: Optional[int] = None
    tolerances: Mapping[str, float] = {}


class FieldSpecReader:
    """
    Reads a field-spec file. Each named field ("xi", "u", "v") is a list of terms {"coeff": [7 reals], "wave":
    [7 ints], "phase": "cos" | "sin"}, given either directly or under a "terms" key. "resolution", "subsamples",
    "seed" and "tolerances" are optional.
    """

    FIELD_NAMES = ("xi", "u", "v")
    SUPPORTED_EXTENSIONS = (".json", ".toml")

    def __init__(self, path: str):
        """
        Initializes the reader.

        Parameters
        ----------
        path : str
            Path of a JSON or TOML file.
        """
        extension = os.path.splitext(path)[1].lower()
        if extension not in self.SUPPORTED_EXTENSIONS:
            raise ValueError(f"Unsupported field-spec extension: {extension}")

        self.path = path
        self.extension = extension

    @classmethod
    def bundled(cls, name: str) -> "FieldSpecReader":
        """
        Reader of one of the specs shipped with the package, e.g. "constant_xi".

        Parameters
        ----------
        name : str
            File name without extension.

        Returns
        -------
        reader : FieldSpecReader
            The reader.
        """
        return cls(os.path.join(BUNDLED_SPECS_FOLDER_PATH, f"{name}.json"))

    @staticmethod
    def bundled_names() -> List[str]:
        return sorted(os.path.splitext(name)[0] for name in os.listdir(BUNDLED_SPECS_FOLDER_PATH))

    @property
    def content(self) -> Dict[str, Any]:
        """
        Raw content of the file.

        Returns
        -------
        content : Dict[str, Any]
            The parsed document.
        """
        if self.extension == ".json":
            with open(self.path) as file:
                content = json.load(file)
        else:
            with open(self.path, "rb") as file:
                content = tomllib.load(file)

        if not isinstance(content, dict):
            raise ValueError(f"Field-spec file {self.path} must contain a mapping at the top level.")

        return content

    @staticmethod
    def _parse_field(value: Any) -> TrigVectorField:
        terms = value.get("terms") if isinstance(value, dict) else value
        if not isinstance(terms, list) or not terms:
            raise ValueError(f"A field needs a non-empty list of terms, got {value}.")

        return TrigVectorField.from_terms(terms)

    def read(self) -> FieldSpec:
        """
        Parses the file.

        Returns
        -------
        spec : FieldSpec
            The fields and sampling settings.
        """
        content = self.content
        unknown = set(content) - set(FieldSpec._fields)
        if unknown:
            raise ValueError(f"Unknown keys in field-spec file {self.path}: {sorted(unknown)}")

        fields = {name: self._parse_field(content[name]) for name in self.FIELD_NAMES if name in content}
        if ("u" in fields) != ("v" in fields):
            raise ValueError("Fields 'u' and 'v' must be given together.")

        for key in ("resolution", "subsamples", "seed"):
            if key in content and not isinstance(content[key], int):
                raise ValueError(f"'{key}' must be an integer, got {content[key]!r}.")

        logger.info(f"Read field spec {self.path} with fields {sorted(fields)}.")

        return FieldSpec(
            **fields,
            resolution=content.get("resolution"),
            subsamples=content.get("subsamples"),
            seed=content.get("seed"),
            tolerances=dict(content.get("tolerances", {}))
        )
