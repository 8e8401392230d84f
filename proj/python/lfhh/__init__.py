"""Python bindings for the lfhh prover."""

from ._lfhh import LfError, analyze, append_signature, bench, check, solve, translate

__all__ = ["LfError", "analyze", "append_signature", "bench", "check", "solve", "translate"]
