"""TxScript interpreter and MEV analysis."""

from ._txmev import (
    ParseError,
    Scenario,
    ScenarioError,
    authorisers,
    can_deduce,
    cli,
    cluster_of,
    gain,
    load_scenario,
    mev,
    mev_freedom_check,
    parse_contract,
    parse_transaction,
    run,
    unrealized_gain,
)

__all__ = [
    "ParseError",
    "Scenario",
    "ScenarioError",
    "authorisers",
    "can_deduce",
    "cli",
    "cluster_of",
    "gain",
    "load_scenario",
    "mev",
    "mev_freedom_check",
    "parse_contract",
    "parse_transaction",
    "run",
    "unrealized_gain",
]
