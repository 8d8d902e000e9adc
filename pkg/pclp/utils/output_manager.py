"""
Output manager for pclp runs.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from ..models import LogLinearModel, Property, write_model
from ..sampler import SampleSet
from .numeric import format_float

logger = logging.getLogger(__name__)

ROUND_LOG_COLUMNS = (
    "round",
    "property",
    "gain",
    "alpha",
    "log_likelihood",
    "likelihood",
    "iterations",
    "converged",
    "exact_gain",
)


class OutputManager:
    """Writes the files of one run into a single directory; file contents carry no timestamps."""

    def __init__(self, base_dir: str = "outputs"):
        self.base_dir = Path(base_dir)
        self.base_dir.mkdir(parents=True, exist_ok=True)

    def log(self, message: str, *args):
        logger.debug("[OUTPUT] " + message, *args)

    def _write(self, name: str, text: str) -> Path:
        path = self.base_dir / name
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        self.log("wrote %s", path)
        return path

    def save_model(self, model: LogLinearModel, name: str = "model.pclp") -> Path:
        return self._write(name, write_model(model))

    def save_round_log(self, records: Sequence[Any], name: str = "rounds.tsv") -> Path:
        """One TAB-separated line per induction round."""
        lines = ["\t".join(ROUND_LOG_COLUMNS)]
        for record in records:
            lines.append(
                "\t".join(
                    [
                        str(record.round),
                        record.property,
                        format_float(record.gain),
                        format_float(record.alpha),
                        format_float(record.log_likelihood),
                        format_float(record.likelihood),
                        str(record.iterations),
                        "yes" if record.converged else "no",
                        "-" if record.exact_gain is None else format_float(record.exact_gain),
                    ]
                )
            )
        return self._write(name, "\n".join(lines) + "\n")

    def save_samples(
        self, samples: SampleSet, properties: Sequence[Property], name: str = "samples.tsv"
    ) -> Path:
        """``query-index TAB tree-hash TAB property counts`` per kept state."""
        lines = []
        for index, chain in enumerate(samples.chains):
            for tree in chain:
                counts = " ".join(str(prop.count(tree)) for prop in properties)
                lines.append(f"{index}\t{tree.tree_hash}\t{counts}")
        return self._write(name, "\n".join(lines) + ("\n" if lines else ""))

    def save_summary(self, summary: Dict[str, Any], name: str = "run_summary.json") -> Path:
        return self._write(name, json.dumps(summary, ensure_ascii=False, indent=2, sort_keys=True) + "\n")

    def save_all_results(
        self,
        model: LogLinearModel,
        records: Sequence[Any],
        summary: Dict[str, Any],
        samples: Optional[SampleSet] = None,
    ) -> Path:
        """Model, round log, summary and, when given, the sample dump."""
        self.save_model(model)
        self.save_round_log(records)
        if samples is not None:
            self.save_samples(samples, model.properties)
        self.save_summary(summary)
        logger.info("results written to %s", self.base_dir)
        return self.base_dir
