"""Coalition structure learning through multiple-bit observation oracles."""

from ._core import (
    CampaignFailure,
    CoalitionStructure,
    Game,
    all_pairs_game,
    auction_gadget,
    bell_number,
    braess_product,
    brute_force_observe,
    campaign_csv,
    first_move_game,
    graphical_lower_bound,
    info_lower_bound,
    learn,
    max_degree,
    observe,
    pd_product,
    prisoner_dilemma,
    random_partition,
    run_campaign,
    upper_bound,
)

FAMILIES = ("normal_form", "congestion", "graphical", "auction_iterative", "auction_bitwise")

__all__ = [
    "CampaignFailure",
    "CoalitionStructure",
    "FAMILIES",
    "Game",
    "all_pairs_game",
    "auction_gadget",
    "bell_number",
    "braess_product",
    "brute_force_observe",
    "campaign_csv",
    "first_move_game",
    "graphical_lower_bound",
    "info_lower_bound",
    "learn",
    "max_degree",
    "observe",
    "pd_product",
    "prisoner_dilemma",
    "random_partition",
    "run_campaign",
    "upper_bound",
]
