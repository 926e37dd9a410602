# Copyright 2026 The mdlearn Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Multi-distribution learning: Hedge learner, derandomization, hash rounding
and discrepancy reductions."""

import json
from fractions import Fraction

from . import _mdlearn
from ._mdlearn import (
    ContractError,
    distinguish,
    gap_example,
    independence_violations,
    min_discrepancy,
    min_error_labeling,
    next_prime,
    planted_zero_matrix,
    poly_hash,
    tail_check,
)

__all__ = [
    "ContractError",
    "coloring_error",
    "distinguish",
    "gap_example",
    "generate",
    "independence_violations",
    "min_discrepancy",
    "min_error_labeling",
    "next_prime",
    "opt",
    "planted_zero_matrix",
    "poly_hash",
    "run_campaign",
    "run_trial",
    "tail_check",
    "worst_case_error",
]


def _text(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def generate(kind="random_label_consistent", **kw):
    """Instance as a dict in the instance-file layout."""
    return json.loads(_mdlearn.generate(kind, **kw))


def opt(instance):
    return _mdlearn.opt(_text(instance))


def worst_case_error(instance, labels):
    return _mdlearn.worst_case_error(_text(instance), list(labels))


def run_trial(instance, **kw):
    return json.loads(_mdlearn.run_trial(_text(instance), **kw))


def run_campaign(trials, instance=None, predicates=None, **kw):
    """Returns (csv_text, summary_dict)."""
    csv, summary = _mdlearn.run_campaign(
        trials,
        predicates=list((predicates or {}).items()),
        instance="" if instance is None else _text(instance),
        **kw,
    )
    return csv, json.loads(summary)


def coloring_error(rows, z):
    num, den = _mdlearn.coloring_error(rows, list(z))
    return Fraction(num, den)
