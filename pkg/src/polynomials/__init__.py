"""Polynomials package - Rogers-Szego, Stieltjes-Wigert, Al-Salam-Chihara, Hermite, Laguerre"""
