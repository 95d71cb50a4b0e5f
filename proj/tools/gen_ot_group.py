#!/usr/bin/env python3
# Copyright 2026 The Photoveil Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates a fresh 2048/256-bit DSA-style group for the OT module.

Prints p, q and g as hex. Paste them into core/src/ot.cc.
"""

import re
import subprocess
import sys


def field(text, name):
    m = re.search(rf"^{name}:\s*\n((?:\s+[0-9a-f:]+\n)+)", text, re.M)
    if not m:
        sys.exit(f"could not find {name} in openssl output")
    return re.sub(r"[\s:]", "", m.group(1)).lstrip("0") or "0"


def main():
    pem = subprocess.run(
        ["openssl", "genpkey", "-genparam", "-algorithm", "DSA",
         "-pkeyopt", "dsa_paramgen_bits:2048",
         "-pkeyopt", "dsa_paramgen_q_bits:256"],
        check=True, capture_output=True, text=True).stdout
    text = subprocess.run(
        ["openssl", "pkeyparam", "-text", "-noout"],
        input=pem, check=True, capture_output=True, text=True).stdout
    p = int(field(text, "P"), 16)
    q = int(field(text, "Q"), 16)
    g = int(field(text, "G"), 16)
    assert (p - 1) % q == 0 and pow(g, q, p) == 1 and g > 1
    for name, value in (("p", p), ("q", q), ("g", g)):
        print(f"{name} = {value:x}")


if __name__ == "__main__":
    main()
