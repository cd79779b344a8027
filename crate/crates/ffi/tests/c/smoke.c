#include <stdio.h>
#include <string.h>

#include "hopfloop.h"

static int fail(const char *what) {
    fprintf(stderr, "%s: %s\n", what, hl_last_error_message());
    return 1;
}

int main(void) {
    HlGraphSum *sum = NULL;
    if (hl_generate(2, 2, "", 0, &sum) != HL_STATUS_OK) return fail("generate");
    printf("graphs %zu\n", hl_graph_sum_len(sum));
    for (size_t i = 0; i < hl_graph_sum_len(sum); i++) {
        char *w = NULL;
        if (hl_graph_sum_weight(sum, i, &w) != HL_STATUS_OK) return fail("weight");
        printf("weight %s\n", w);
        hl_string_free(w);
    }
    hl_graph_sum_free(sum);

    HlModel *model = NULL;
    const char *phi3 = "{\"labels\":[\"o\"],\"propagator\":{\"o,o\":\"3/2\"},\"vertex\":{\"3\":\"27/20\"}}";
    if (hl_model_from_json(phi3, &model) != HL_STATUS_OK) return fail("model");
    char *value = NULL;
    if (hl_sigma(model, 2, 2, "", 0, &value) != HL_STATUS_OK) return fail("sigma");
    printf("sigma %s\n", value);
    hl_string_free(value);
    hl_model_free(model);

    if (hl_model_from_json("{\"labels\":[\"o\"],\"propagator\":{\"o,o\":\"0\"}}", &model) != HL_STATUS_MODEL_INVALID)
        return 1;
    printf("singular rejected\n");
    return 0;
}
