"""
Command-line front end.

    pclp enumerate | erf-demo | induce | sample | best | eval

Results go to stdout, diagnostics to stderr (level from ``PCLP_LOG``).
Exit codes: 0 success, 1 failure, 2 bad input or usage, 3 query without proof
under ``--strict``.
"""

import argparse
import logging
import math
import os
import sys
from collections import Counter
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .clp import ProofEnumerator, Program, Query, first_proof, parse_corpus, parse_program
from .default_config import RunConfig
from .errors import ModelFormatError, NoProof, ParameterFileError, PCLPError, ProgramSyntaxError
from .estimators import MonteCarloEstimator
from .evaluators import RegressionEvaluator
from .fixtures import SAMPLE_CORPUS, SAMPLE_PROGRAM
from .graph import InductionGraph
from .models import (
    ChoiceParams,
    LogLinearModel,
    TreeSpace,
    corpus_likelihood,
    distinct_queries,
    erf_table,
    normalized_tree_dist,
    read_model,
    scf_prob,
    write_model,
)
from .sampler import draw_samples
from .search import best_proof
from .utils.numeric import format_float
from .utils.output_manager import OutputManager

logger = logging.getLogger("pclp")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_NO_PROOF = 0, 1, 2, 3


def configure_logging(level: Optional[str] = None) -> None:
    name = (level or os.getenv("PCLP_LOG", "WARNING")).upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _read(path: Optional[str], fallback: str) -> Tuple[str, str]:
    if path is None:
        return fallback, "<sample>"
    with open(path, "r", encoding="utf-8") as f:
        return f.read(), path


def load_inputs(config: RunConfig) -> Tuple[Program, List[Query]]:
    """Program and corpus from the given files, or the built-in sample."""
    program = parse_program(*_read(config.program, SAMPLE_PROGRAM))
    corpus = parse_corpus(*_read(config.corpus, SAMPLE_CORPUS))
    return program, corpus


def load_model(config: RunConfig, program: Program) -> LogLinearModel:
    if config.model is None:
        return LogLinearModel.initial(program)
    text, source = _read(config.model, "")
    return read_model(text, program, source)


def covered_corpus(program: Program, corpus: Sequence[Query], config: RunConfig) -> List[Query]:
    """Queries with at least one proof; the others are skipped unless ``--strict``."""
    kept = []
    for query in corpus:
        if first_proof(program, query, config.depth) is None:
            if config.strict:
                raise NoProof(query, config.depth)
            logger.warning("skipping '%s': no proof within depth %d", query, config.depth)
            continue
        kept.append(query)
    return kept


def cmd_enumerate(config: RunConfig) -> int:
    program, corpus = load_inputs(config)
    base = load_model(config, program).base
    queries, _ = distinct_queries(corpus)
    for query in queries:
        enumerator = ProofEnumerator(program, config.depth)
        trees = list(enumerator.proofs(query))
        if enumerator.censored:
            logger.info("'%s': %d branches cut at depth %d", query, enumerator.censored, config.depth)
        print(f"query\t{query}\t{len(trees)} trees")
        if not trees:
            if config.strict:
                raise NoProof(query, config.depth)
            logger.warning("no proof for '%s' within depth %d", query, config.depth)
        for tree in trees:
            print(f"\t{tree.bracketed()}\t{tree.answer}\t{format_float(scf_prob(base, tree))}")
    return EXIT_OK


def cmd_erf_demo(config: RunConfig) -> int:
    """Expected-rule-frequency table, the renormalized model it yields, and the log-linear comparison."""
    program, corpus = load_inputs(config)
    corpus = covered_corpus(program, corpus, config)
    params = load_model(config, program).base
    report = erf_table(params, corpus, program, config.depth)
    print("query\t" + "\t".join(report.clause_keys))
    for query, row in zip(report.queries, report.rows):
        print(query + "\t" + "\t".join(format_float(value) for value in row))
    print("total\t" + "\t".join(format_float(value) for value in report.totals))
    print("denominator\t" + "\t".join(format_float(value) for value in report.denominators))
    print("estimate\t" + "\t".join(format_float(report.estimate[key]) for key in report.clause_keys))

    space = TreeSpace(program, corpus, config.depth, config.exact_tree_limit)
    estimate = ChoiceParams.from_mapping(program, report.estimate)
    renormalized = normalized_tree_dist(estimate, space.trees)
    for tree, mass in zip(renormalized.support, renormalized.mass):
        print(f"renormalized\t{tree.bracketed()}\t{tree.answer}\t{format_float(mass)}")
    p_erf = corpus_likelihood(renormalized, corpus)

    graph = InductionGraph(program, corpus, config.depth, config.model_dump())
    state = graph.run(LogLinearModel.initial(program, params))
    p_loglinear = math.exp(state.log_likelihood)
    print(f"likelihood\trenormalized\t{format_float(p_erf)}")
    print(f"likelihood\tlog-linear\t{format_float(p_loglinear)}")
    verdict = "higher" if p_loglinear > p_erf else "not higher"
    print(f"verdict\tlog-linear likelihood is {verdict}")
    return EXIT_OK


def cmd_induce(config: RunConfig) -> int:
    program, corpus = load_inputs(config)
    corpus = covered_corpus(program, corpus, config)
    initial = load_model(config, program)
    graph = InductionGraph(program, corpus, config.depth, config.model_dump(), debug=config.debug)
    state = graph.run(initial)
    for record in state.records:
        line = (
            f"round\t{record.round}\t{record.property}\t{format_float(record.gain)}\t"
            f"{format_float(record.alpha)}\t{format_float(record.log_likelihood)}"
        )
        if record.exact_gain is not None:
            line += f"\texact-gain {format_float(record.exact_gain)}"
        print(line)
    print(f"stop\t{state.stop_reason}")
    print(write_model(state.model), end="")
    if config.out:
        summary = {
            "mode": config.mode,
            "depth": config.depth,
            "rounds": len(state.records),
            "stop_reason": state.stop_reason,
            "log_likelihood": state.log_likelihood,
            "queries": len(corpus),
            "seed": config.seed,
            "combined": config.combined if config.mode == "mc" else None,
        }
        OutputManager(config.out).save_all_results(state.model, state.records, summary)
    return EXIT_OK


def cmd_sample(config: RunConfig) -> int:
    if config.seed is None:
        raise ValueError("sampling requires --seed")
    program, corpus = load_inputs(config)
    corpus = covered_corpus(program, corpus, config)
    model = load_model(config, program)
    proposal = model.base
    if config.proposal == "moments":
        space = TreeSpace(program, corpus, config.depth, config.exact_tree_limit)
        proposal = MonteCarloEstimator(config.model_dump()).proposal(model, space)
    samples = draw_samples(
        model,
        corpus,
        proposal,
        config.depth,
        samples=config.samples,
        burnin=config.burnin,
        thin=config.thin,
        seed=config.seed,
        retry_budget=config.retry_budget,
        combined=config.combined,
    )
    for index, (query, chain) in enumerate(zip(samples.queries, samples.chains)):
        frequencies = Counter(chain)
        for tree in sorted(frequencies, key=lambda t: t.clause_ids):
            share = frequencies[tree] / len(chain)
            print(f"{index}\t{query}\t{tree.bracketed()}\t{format_float(share)}")
    if config.out:
        OutputManager(config.out).save_samples(samples, model.properties)
    return EXIT_OK


def cmd_best(config: RunConfig) -> int:
    program, corpus = load_inputs(config)
    model = load_model(config, program)
    for query in corpus:
        try:
            found = best_proof(model, query, config.depth)
        except NoProof:
            if config.strict:
                raise
            logger.warning("no proof for '%s' within depth %d", query, config.depth)
            print(f"{query}\t-inf\t-")
            continue
        logger.info("'%s' searched with the %s method", query, found.method)
        print(f"{query}\t{format_float(found.log_weight)}\t{found.tree.bracketed()}")
    return EXIT_OK


def cmd_eval(config: RunConfig) -> int:
    results = RegressionEvaluator(config.model_dump()).evaluate()
    for result in results:
        print(result.line())
    return EXIT_OK if all(result.passed for result in results) else EXIT_FAILURE


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "enumerate": cmd_enumerate,
    "erf-demo": cmd_erf_demo,
    "induce": cmd_induce,
    "sample": cmd_sample,
    "best": cmd_best,
    "eval": cmd_eval,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pclp", description="Probabilistic constraint logic programming.")
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument("--program", help="program file (.pclp); the built-in sample when omitted")
    parser.add_argument("--corpus", help="query corpus (.qry); the built-in sample when omitted")
    parser.add_argument("--model", help="model file to start from or to search with")
    parser.add_argument("--depth", type=int, help="bound on clauses per proof tree")
    parser.add_argument("--seed", type=int, help="master seed for Monte-Carlo runs")
    parser.add_argument("--mode", choices=["exact", "mc"], help="estimator used by induce")
    parser.add_argument("--samples", type=int, help="kept states per chain")
    parser.add_argument("--burnin", type=int, help="discarded states per chain")
    parser.add_argument(
        "--combined", choices=["joint", "corpus"], help="how the Monte-Carlo combined sample is drawn"
    )
    parser.add_argument("--rounds", type=int, help="property-induction rounds")
    parser.add_argument("--iters", type=int, help="maximum IM iterations per round")
    parser.add_argument("--tol", type=float, help="gain and likelihood-change tolerance")
    parser.add_argument("--out", help="directory for model, round log and summary")
    parser.add_argument("--strict", action="store_true", help="fail with exit code 3 on a query without proof")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    overrides = {key: value for key, value in vars(args).items() if key != "command"}
    try:
        config = RunConfig.from_overrides(overrides)
    except ValidationError as exc:
        print(f"pclp: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](config)
    except (ProgramSyntaxError, ParameterFileError, ModelFormatError) as exc:
        print(f"pclp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"pclp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoProof as exc:
        print(f"pclp: {exc}", file=sys.stderr)
        return EXIT_NO_PROOF if config.strict else EXIT_FAILURE
    except (PCLPError, ValueError) as exc:
        print(f"pclp: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
