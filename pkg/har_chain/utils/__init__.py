"""Shared helpers: seeded random streams and deterministic JSON output."""

from har_chain.utils.jsonio import dumps_json, write_json
from har_chain.utils.seeding import derive_rng

__all__ = ["derive_rng", "dumps_json", "write_json"]
