"""
Test suite for hetvar
"""
