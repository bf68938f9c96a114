"""Índices de deficiência de operadores de Schrödinger com fluxos magnéticos pontuais."""
