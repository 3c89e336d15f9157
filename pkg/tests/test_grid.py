import time

import pytest

from core import Document
from core.errors import BackTranslationError, ConfigurationError
from perturb import (
    OP_TYPES,
    DictionaryTranslator,
    IdentityTranslator,
    PerturbationConfig,
    SynonymLexicon,
    back_translate,
    build_perturbation_grid,
    grid_cells,
    lexicon_from_wordnet,
    load_lexicon,
    make_case_id,
    save_lexicon,
)


class EmptyTranslator:
    def translate(self, text, source, target):
        return ""


def _documents(count: int) -> list[Document]:
    return [
        Document(f"{i:06d}", f"the film number{i} has good acting and a really dull plot about item{i}")
        for i in range(count)
    ]


class TestGrid:
    def test_two_hundred_documents_make_3600_cases(self):
        started = time.perf_counter()
        grid = build_perturbation_grid(_documents(200), mt_client=IdentityTranslator(), global_seed=1,
                                       dataset="synthetic")
        assert len(grid.cases) == 3600
        assert not grid.skipped
        assert time.perf_counter() - started < 10

    def test_identity_back_translation_cells_are_replicates(self):
        grid = build_perturbation_grid(_documents(1), mt_client=IdentityTranslator())
        assert len(grid.cases) == 18
        bt = [c for c in grid.cases if c.config.op_type == "back_translate"]
        assert len(bt) == 3
        assert len({c.perturbed.text for c in bt}) == 1
        assert [c.replicate for c in bt] == [False, True, True]

    def test_empty_document_list(self):
        grid = build_perturbation_grid([], mt_client=IdentityTranslator())
        assert grid.cases == [] and grid.skipped == []

    def test_without_mt_client_back_translation_is_skipped(self):
        grid = build_perturbation_grid(_documents(2))
        assert len(grid.cases) == 30
        assert len(grid.skipped) == 6
        assert all("MT" in s.reason for s in grid.skipped)

    def test_empty_translation_is_skipped_with_reason(self):
        grid = build_perturbation_grid(_documents(1), configs=[("back_translate", 0.05)], mt_client=EmptyTranslator())
        assert not grid.cases
        assert grid.skipped[0].reason.startswith("back-translation failed")

    def test_pairing_is_reproducible_per_case(self):
        documents = _documents(5)
        full = build_perturbation_grid(documents, mt_client=IdentityTranslator(), global_seed=9)
        subset = build_perturbation_grid(documents[3:4], configs=[("word_shuffle", 0.2)], global_seed=9)
        match = [c for c in full.cases if c.case_id == subset.cases[0].case_id]
        assert match[0].perturbed.text == subset.cases[0].perturbed.text

    def test_case_ids(self):
        assert make_case_id("sst2", "000042", "char_swap", 0.05) == "sst2/000042~char_swap@0.05"
        grid = build_perturbation_grid(_documents(1), configs=[("word_delete", 0.1)], dataset="d")
        assert grid.cases[0].case_id == "d/000000~word_delete@0.10"

    def test_config_validation(self):
        assert len(grid_cells()) == 18
        with pytest.raises(ValueError):
            PerturbationConfig("typo", 0.05)
        with pytest.raises(ValueError):
            PerturbationConfig(OP_TYPES[0], 0.3)


class TestBackTranslation:
    def test_identity(self):
        assert back_translate("good film", IdentityTranslator()) == "good film"

    def test_dictionary_double(self):
        translator = DictionaryTranslator({"good": "gut", "film": "Film"}, {"gut": "fine", "film": "film"})
        assert back_translate("good film", translator) == "fine film"

    def test_empty_translation_raises(self):
        with pytest.raises(BackTranslationError):
            back_translate("good film", EmptyTranslator())


class TestLexicon:
    def test_round_trip_through_tsv(self, tmp_path):
        lexicon = SynonymLexicon({"good": ["fine", "decent", "good"], "film": ["movie"]})
        path = tmp_path / "lexicon.tsv"
        save_lexicon(lexicon, path)
        loaded = load_lexicon(path)
        assert loaded.candidates("good") == ("fine", "decent")
        assert loaded.candidates("Film") == ("movie",)
        assert loaded.candidates("plot") == ()

    def test_malformed_line_names_line_number(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("# header\ngood fine\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match=":2:"):
            load_lexicon(path)

    def test_wordnet_data_files(self, tmp_path):
        path = tmp_path / "data.adj"
        path.write_text(
            "  1 This software and database is being provided\n"
            "00001740 00 a 03 good(a) 0 full 0 well_made 0 000 | having desirable qualities\n"
            "00002098 00 s 02 dull 0 boring 0 000 | uninteresting\n",
            encoding="utf-8",
        )
        lexicon = lexicon_from_wordnet([path])
        assert lexicon.candidates("good") == ("full",)
        assert lexicon.candidates("boring") == ("dull",)
        assert "well_made" not in lexicon
