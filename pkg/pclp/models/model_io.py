"""
Line-oriented model files.

    root <lambda>
    bind <argpath> <term> <lambda>
    tree <s-expression of clause keys> <lambda>
    base <pred/arity> <j> <prob>        (only when p₀ is not uniform)

Parameters are written with 17 significant digits so a model survives a
write/read cycle unchanged.
"""

import math
from typing import Dict, List, Optional

from ..clp import Program
from ..errors import ModelFormatError, ParameterFileError
from ..utils.numeric import format_parameter
from .loglinear import LogLinearModel
from .properties import ROOT, Property, parse_property
from .scf import ChoiceParams, read_choice_params, write_choice_params


def write_model(model: LogLinearModel) -> str:
    lines = [f"{prop.serialize()} {format_parameter(weight)}" for prop, weight in zip(model.properties, model.weights)]
    if model.base != ChoiceParams.uniform(model.program):
        lines.extend(f"base {line}" for line in write_choice_params(model.base).splitlines())
    return "\n".join(lines) + "\n"


def read_model(text: str, program: Program, source: Optional[str] = None) -> LogLinearModel:
    """Parse a model file; a missing root line means a root weight of zero."""
    where = f"{source}: " if source else ""
    weights: Dict[Property, float] = {}
    order: List[Property] = []
    base_lines: List[str] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if line.startswith("base "):
            base_lines.append(line[len("base "):])
            continue
        body, _, value = line.rpartition(" ")
        try:
            weight = float(value)
        except ValueError:
            raise ModelFormatError(f"{where}line {number}: missing parameter value") from None
        if not math.isfinite(weight):
            raise ModelFormatError(f"{where}line {number}: parameter must be finite")
        try:
            prop = parse_property(body, program)
        except ModelFormatError as exc:
            raise ModelFormatError(f"{where}line {number}: {exc}") from exc
        if prop in weights:
            raise ModelFormatError(f"{where}line {number}: duplicate property {prop}")
        weights[prop] = weight
        order.append(prop)

    try:
        base = read_choice_params("\n".join(base_lines), program) if base_lines else ChoiceParams.uniform(program)
    except ParameterFileError as exc:
        raise ModelFormatError(f"{where}{exc}") from exc

    properties = [ROOT] + [prop for prop in order if prop != ROOT]
    return LogLinearModel(tuple(properties), tuple(weights.get(prop, 0.0) for prop in properties), base)
