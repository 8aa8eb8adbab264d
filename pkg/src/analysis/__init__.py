#!/usr/bin/env python3
"""
Statistical checks on simulation output
"""
