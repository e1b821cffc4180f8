"""Quadrature package - integral-definition oracles"""
