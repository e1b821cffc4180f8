"""Phase-space package - Wigner and Husimi distributions, moments"""
