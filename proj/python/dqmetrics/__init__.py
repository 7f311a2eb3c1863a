# Copyright 2026 The dqmetrics Authors
#
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
"""Python bindings for the dqmetrics C++ core."""

import json as _json

from dqmetrics._core import (
    Anonymization,
    Table,
    anonymize,
    average_precision,
    estimate_entropy,
    estimate_mi,
    g_test,
    roc_auc,
    run_cli,
    sampled_nmi,
    scale_nmiv1,
    welch_t_test,
)

__all__ = [
    "Anonymization",
    "Table",
    "anonymize",
    "average_precision",
    "estimate_entropy",
    "estimate_mi",
    "evaluate",
    "g_test",
    "roc_auc",
    "run_cli",
    "sampled_nmi",
    "scale_nmiv1",
    "welch_t_test",
]


def evaluate(anonymization, thresholds=None, compute_nmi=True, seed=0):
    """Scores an anonymization; returns the metric report as a dict."""
    text = _json.dumps(thresholds) if thresholds else ""
    return _json.loads(anonymization.evaluate(text, compute_nmi, seed))
