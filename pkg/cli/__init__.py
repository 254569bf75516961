"""
CLI module for pfrechet
"""
