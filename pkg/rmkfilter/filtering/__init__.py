from rmkfilter.filtering.klms import (
    OnlineFilterState,
    klms_baseline,
    online_init,
    online_step,
    run_online,
)

__all__ = [
    "OnlineFilterState",
    "klms_baseline",
    "online_init",
    "online_step",
    "run_online",
]
