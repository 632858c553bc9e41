"""Prime constellation laboratory: multiplet counts, PDFs and constellation constants."""
