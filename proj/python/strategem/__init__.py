"""IO vs RBV market-entry simulator (Python bindings)."""

from ._strategem import (  # noqa: F401
    Action,
    ConfigError,
    Firm,
    Market,
    MarketChoice,
    ResourceBundle,
    RbvProfile,
    SfmState,
    SimConfig,
    Strategy,
    World,
    aggregate_csv,
    bundle_value,
    derive_seed,
    instant_roa,
    io_choose_market,
    relative_diff,
    resource_shortfall,
    run_batch,
    run_one,
    total_performance,
)
