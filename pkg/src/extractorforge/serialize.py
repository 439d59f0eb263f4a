"""Canonical JSON serialization and content addressing for specs.

Specs serialize through their ``to_json_dict`` methods; this module fixes
the byte-level form (sorted keys, no whitespace) so that equal specs always
produce identical bytes and therefore identical digests.
"""

from __future__ import annotations

import hashlib
import json

from .compose import BlockSpec, PipelineSpec
from .condenser import CondenserSpec
from .toeplitz import ToeplitzSpec
from .trevisan import ExtractorSpec

_SPEC_TYPES = {
    "trevisan": ExtractorSpec,
    "toeplitz": ToeplitzSpec,
    "guv": CondenserSpec,
    "blockComposed": BlockSpec,
    "pipeline": PipelineSpec,
}


def canonical_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def spec_to_json(spec) -> str:
    return canonical_json(spec.to_json_dict())


def spec_digest(spec) -> str:
    return hashlib.sha256(spec_to_json(spec).encode()).hexdigest()


def spec_from_json_dict(data: dict):
    kind = data.get("type")
    if kind is None:
        raise ValueError("spec missing its type tag")
    cls = _SPEC_TYPES.get(kind)
    if cls is None:
        raise ValueError(f"unknown spec type {kind!r}")
    return cls.from_json_dict(data)


def spec_from_json(text: str):
    return spec_from_json_dict(json.loads(text))
