# Copyright 2026 The bellsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for bellsim."""

import json as _json

from ._bellsim import *  # noqa: F401,F403
from ._bellsim import run_command as _run_command

__version__ = "0.1.0"


def run(command, manifest, seed=None, workers=1, base_dir=""):
    """Run a driver command on a manifest dict; returns (exit_code, report, artifacts)."""
    code, report, artifacts = _run_command(command, _json.dumps(manifest), seed, workers, base_dir)
    return code, _json.loads(report), artifacts
