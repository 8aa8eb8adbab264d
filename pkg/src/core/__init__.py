#!/usr/bin/env python3
"""
Simulation core: point processes, the Hammersley engine, couplings and longest paths
"""
