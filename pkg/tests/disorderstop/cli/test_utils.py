# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""Unit tests for CLI helpers"""

from disorderstop.cli.utils import comma_sep_to_list, mc_config_from


def test_comma_sep_to_list() -> None:
    assert comma_sep_to_list("lemma, value ,dominance") == ["lemma", "value", "dominance"]
    assert comma_sep_to_list("") == []
    assert comma_sep_to_list("  ") == []


def test_mc_config_from_overrides() -> None:
    kwargs = {"seed": 3, "paths": 100, "threads": 2}
    config = mc_config_from(kwargs, n_paths=50)

    assert (config.seed, config.n_paths, config.threads) == (3, 50, 2)
