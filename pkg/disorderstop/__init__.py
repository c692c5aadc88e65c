# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""
disorderstop - A python library and command line utility that computes optimal
stopping boundaries and values for a Brownian motion and a geometric Brownian
motion whose drift turns negative at a uniformly distributed disorder time.
"""
