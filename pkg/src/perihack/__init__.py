"""PeriHack: a red-vs-blue cybersecurity board game in software.

The pieces: `catalog` defines scenarios as data, `engine` runs matches,
`agents` supplies machine players, `sim` batches seeded matches into balance
reports, and `server` hosts live games over HTTP for the browser client.
"""

__version__ = "0.1.0"

from .catalog import (  # noqa: F401
    CatalogError,
    ScenarioCatalog,
    default_catalog,
    load_catalog,
    validate_catalog,
)
from .engine import (  # noqa: F401
    GameConfig,
    GameState,
    IllegalActionError,
    apply_action,
    attack_success_probability,
    blue_setup,
    check_win,
    choose_win_condition,
    legal_actions,
    new_game,
    red_setup,
    resolve_attack,
)
from .views import PlayerView, player_view  # noqa: F401
