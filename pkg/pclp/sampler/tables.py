"""
Count tables over a sample set.

S[c][v]     weight of combined-sample trees on which property c takes value v
T[y][c][v]  number of trees of query y's chain on which c takes value v
U[i][m]     total count of model property i over combined-sample trees with
            ν_#(x) = m, ν_# taken over the model's properties
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from ..clp import ProofTree
from ..models import LogLinearModel, Property
from .mh import SampleSet


@dataclass
class CountTables:
    properties: Tuple[Property, ...]
    model_properties: Tuple[Property, ...]
    S: Dict[Property, Counter] = field(default_factory=dict)
    T: List[Dict[Property, Counter]] = field(default_factory=list)
    U: Dict[int, Counter] = field(default_factory=dict)
    chain_sizes: List[int] = field(default_factory=list)
    multiplicity: Sequence[float] = ()
    corpus_size: float = 0.0
    combined_size: float = 0.0


def _counts(tree: ProofTree, properties: Sequence[Property], cache: Dict[ProofTree, Tuple[int, ...]]):
    if tree not in cache:
        cache[tree] = tuple(prop.count(tree) for prop in properties)
    return cache[tree]


def build_tables(
    samples: SampleSet, model: LogLinearModel, candidates: Sequence[Property] = ()
) -> CountTables:
    """One pass over the chains and the combined sample."""
    model_properties = tuple(model.properties)
    extra = tuple(prop for prop in candidates if prop not in model)
    properties = model_properties + extra
    cache: Dict[ProofTree, Tuple[int, ...]] = {}

    S = {prop: Counter() for prop in properties}
    U = {index: Counter() for index in range(len(model_properties))}
    for tree, weight in samples.combined_items():
        values = _counts(tree, properties, cache)
        for prop, value in zip(properties, values):
            S[prop][value] += weight
        total = sum(values[: len(model_properties)])
        for index in range(len(model_properties)):
            U[index][total] += weight * values[index]

    T: List[Dict[Property, Counter]] = []
    for chain in samples.chains:
        table = {prop: Counter() for prop in properties}
        for tree in chain:
            for prop, value in zip(properties, _counts(tree, properties, cache)):
                table[prop][value] += 1
        T.append(table)

    return CountTables(
        properties=properties,
        model_properties=model_properties,
        S=S,
        T=T,
        U=U,
        chain_sizes=[len(chain) for chain in samples.chains],
        multiplicity=list(samples.multiplicity),
        corpus_size=samples.corpus_size,
        combined_size=samples.combined_size,
    )
