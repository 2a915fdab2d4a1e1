"""
Tests package for BohmianWalls
"""
