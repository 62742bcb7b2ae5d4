"""Python bindings for the mimocc coded-caching toolkit."""

from ._mimocc import (  # noqa: F401
    MimoccError,
    NetworkConfig,
    binomial,
    build_multicast_plan,
    build_unicast_plan,
    count_dof,
    count_subpacketization,
    elevate_baseline,
    estimate_dof_slope,
    export_plan,
    import_baseline,
    import_plan,
    k6_fixture_documents,
    make_config,
    plan_subpacketization,
    run_sweep,
    verify_plan,
)

__all__ = [name for name in dir() if not name.startswith("_")]
