"""
Test suite for wallcross.
"""
