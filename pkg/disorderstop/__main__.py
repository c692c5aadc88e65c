# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors


# python -m disorderstop runs the same click group as the console script

from disorderstop.cli.root import root_cmd


def init() -> None:
    """Initialize disorder-stop"""
    if __name__ == "__main__":
        root_cmd()


init()
