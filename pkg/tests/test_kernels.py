import os
import subprocess
import sys

import numpy as np
import pytest

import stableperm
from stableperm import Rng, generate_instance
from stableperm._kernels import (
    POLICY_FIFO,
    POLICY_LIFO,
    POLICY_RANDOM,
    _ref,
)

_fast = pytest.importorskip(
    "stableperm._kernels._fast",
    reason="compiled lane not built; nothing to compare against")

POLICIES = [(POLICY_LIFO, 0), (POLICY_FIFO, 0),
            (POLICY_RANDOM, 13), (POLICY_RANDOM, 77)]


def _instances():
    for n in (2, 3, 5, 9, 17, 41):
        for trial in range(6):
            prefs = generate_instance(n, Rng(5000).stream(n, trial))
            yield n, prefs


class TestLaneParity:
    def test_proposal_kernel_identical(self):
        for n, prefs in _instances():
            orders = [np.arange(n, dtype=np.int32),
                      np.arange(n, dtype=np.int32)[::-1].copy()]
            for order0 in orders:
                for policy, seed in POLICIES:
                    for record in (False, True):
                        a = _ref.run_proposals_kernel(
                            prefs._lists0, prefs._rank0, order0,
                            policy, seed, record)
                        b = _fast.run_proposals_kernel(
                            prefs._lists0, prefs._rank0, order0,
                            policy, seed, record)
                        assert np.array_equal(np.asarray(a[0]),
                                              np.asarray(b[0]))
                        assert a[1] == b[1] and a[2] == b[2]
                        if not record:
                            assert a[3] is None and b[3] is None
                        else:
                            for col_a, col_b in zip(a[3], b[3]):
                                assert np.array_equal(np.asarray(col_a),
                                                      np.asarray(col_b))

    def test_stable_mask_identical(self):
        from stableperm.oracle import _perm_pool
        for n in (2, 3, 5, 6):
            pool = _perm_pool(n)
            for trial in range(4):
                prefs = generate_instance(n, Rng(42).stream(n, trial))
                ref_mask = np.asarray(_ref.stable_mask_kernel(
                    prefs._rank0, pool), dtype=bool)
                fast_mask = np.asarray(_fast.stable_mask_kernel(
                    prefs._rank0, pool), dtype=bool)
                assert np.array_equal(ref_mask, fast_mask)
                assert ref_mask.any()  # a stable permutation always exists


class TestBackendSelector:
    def _backend_in_subprocess(self, extra_env):
        env = dict(os.environ)
        env.pop("STABLEPERM_PURE", None)
        env.update(extra_env)
        out = subprocess.run(
            [sys.executable, "-c",
             "import stableperm; print(stableperm.kernel_backend)"],
            capture_output=True, text=True, env=env, check=True)
        return out.stdout.strip()

    def test_default_prefers_compiled(self):
        assert self._backend_in_subprocess({}) == "compiled"
        assert stableperm.kernel_backend == "compiled"

    def test_pure_override(self):
        assert self._backend_in_subprocess({"STABLEPERM_PURE": "1"}) == "pure"

    def test_pure_lane_end_to_end(self):
        env = dict(os.environ)
        env["STABLEPERM_PURE"] = "1"
        code = (
            "import stableperm as sp\n"
            "prefs = sp.generate_instance(7, sp.Rng(321))\n"
            "out = sp.run_proposals(prefs)\n"
            "print(out.pi0.cycle_notation(), out.proposals, out.pariah)\n"
        )
        pure = subprocess.run([sys.executable, "-c", code],
                              capture_output=True, text=True, env=env,
                              check=True).stdout
        import stableperm as sp
        prefs = sp.generate_instance(7, sp.Rng(321))
        out = sp.run_proposals(prefs)
        assert pure.strip() == (
            f"{out.pi0.cycle_notation()} {out.proposals} {out.pariah}")
