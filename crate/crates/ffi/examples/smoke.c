/* Classifies the net given on the command line through the C interface. */

#include <stdio.h>
#include <stdlib.h>

#include "pnpersist.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    rewind(f);
    char *buf = malloc((size_t)n + 1);
    size_t got = fread(buf, 1, (size_t)n, f);
    buf[got] = '\0';
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s NET\n", argv[0]);
        return 2;
    }
    char *text = slurp(argv[1]);
    if (!text) {
        perror(argv[1]);
        return 2;
    }
    PnNet *net = NULL;
    PnStatus st = pn_net_parse(text, &net);
    free(text);
    if (st != PN_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", pn_last_error());
        return 3;
    }

    PnVerdict v;
    uint32_t k = 0;
    st = pn_net_classify(net, 1000000, &v, &k);
    if (st != PN_STATUS_OK) {
        fprintf(stderr, "classify: %s\n", pn_last_error());
        pn_net_free(net);
        return 3;
    }
    char *min = NULL;
    if (pn_net_min_re_json(net, "a", "b", 1000000, &min) == PN_STATUS_OK && min) {
        printf("min-re a b %s\n", min);
        pn_string_free(min);
    }
    if (v == PN_VERDICT_HOLDS)
        printf("places %zu transitions %zu el-k %u\n", pn_net_place_count(net), pn_net_transition_count(net), k);
    else
        printf("places %zu transitions %zu %s\n", pn_net_place_count(net), pn_net_transition_count(net),
               v == PN_VERDICT_VIOLATED ? "not-el" : "unknown");
    pn_net_free(net);
    return 0;
}
