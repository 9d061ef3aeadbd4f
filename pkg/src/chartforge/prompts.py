"""Prompt templates for the LLM backend path.

These texts are functional wire-format assets: the generation service is
prompted with exactly this wording, and response parsing depends on the
wrapper tokens they request (<data start>, <code start>, ...). Do not
reword them without updating the parsers.
"""

from __future__ import annotations

from .model import ChartSpec, DataTable
from .sampler import constraint_for

DATA_PROMPT = """You are an expert at generating data in csv format. You receive several key characteristics about the data.
Your final output should include data in CSV format for the chart, and a comprehensive description of the chart data and figure.

##Expected characteristics of the data in the chart.
The chart is {chart_type}.
The theme of the chart is {theme}.
Different series of data in the chart can have different trends. The trends in the chart data should include as many of the given trends as possible: {trends}.
The data should be diverse and contain several outliers. The numbers of columns and rows should satisfy: {row_column}. {data_constraints}
You can list the nouns you know, which are related with the theme, along the first column and row of the table.

## Requirement about the description
The description should focus on several key elements: the chart's theme, the general trend of the data, individual trends
within the data, the comparison between data, and any outliers present in the chart.

## Requirement about the output
Your output should comprise the generated data wrapped in <data start> and <data end>, and detailed descriptions
about the chart wrapped in <description start> and <description end>.
"""

CODE_PROMPT = """You are a specialist in two aspects, drawing charts with {engine}, and providing detailed descriptions about the chart.
You receive the data in the format of csv table.
You need to generate Python code to plot the given data as a chart figure and providing detailed description about the figure.

Additional requirements:

You can freely set the chart styles to increase the diversity, including title, legend, labels on x-axis and y-axis.
You can annotate data values above the point on the chart figure.

Do not use show function to show the figure.
Save the figure as a jpg file, with filename "{filename}"
The csv data should be listed in the code.

The output contains two parts.
The first part is the generated Python code wrapped in <code start> and <code end>.
Next is the detailed description about the chart wrapped in <description start> and <description end>.
The code should be able to be executed without external files.

Draw a {chart_type} with the given data:

{data}
"""

SIMPLE_QA_PROMPT = """You are an AI visual assistant that can analyze chart figures. You receive two detailed descriptions, raw data, and the python code drawing the figure about the same chart. The first description is the information about the raw data in the chart. The second description is about the chart figure based on Python code. In addition, raw data values within the chart is given. The python code generating the chart is given as well. Answer all questions as you are seeing the chart figure. Design a question-answer pair between you and a person asking about this chart figure. The answers should be a single word or phrase, and in a tone that a visual AI assistant is seeing the chart figure and answering the question.

Ask diverse questions and give corresponding answers. The number of questions needs to be between 3 and 20. Include questions asking about {characteristics} and so on.
Only include questions that have definite answers:(1) one can see in the chart figure that the question asks about and can answer confidently;(2) one can determine confidently from the chart figure that it is not in the chart figure.

Do not ask any question that cannot be answered confidently. The answers should be a single word or phrase.

#Here are some examples and remember to follow their format:

{instruction_examples}

#The first description:

{data_des}

#The second description:

{chart_des}

#The raw data:

{raw_data}

#The code:

{code}

Output:
"""

COMPLEX_QA_PROMPT = """You are an AI visual assistant that can analyze chart figures. You receive two detailed descriptions, raw data, and the python code drawing the figure about the same chart. The first description is the information about the raw data in the chart. The second description is about the chart figure based on Python code. In addition, raw data values within the chart is given. The python code generating the chart is given as well. Answer all questions as you are seeing the chart figure. Design a question-answer pair between you and a person asking about this chart figure. The answers should be a single word or phrase, and in a tone that a visual AI assistant is seeing the chart figure and answering the question.

Ask diverse questions and give corresponding answers. The number of questions needs to be between 2 and 10. Include questions asking about {characteristics} and so on.

Only include questions that have definite answers:(1) one can see in the chart figure that the question asks about and can answer confidently;(2) one can determine confidently from the chart figure that it is not in the chart figure.

Do not ask any question that cannot be answered confidently. You need to follow the steps below to reason before generating the answer:

(1) Describe the relevant information from the image needed to answer the question. (Do not mention the 'raw data', 'code', 'table' and so on, use 'chart' or 'figure' instead)

(2) Use the information described in (1) to reason about the problem by working step by step to arrive at the final answer.

(3) state the final answer.

# Here are some examples and remember to follow their format:

{cot_example}

# The first description:

{data_des}

# The second description:

{chart_des}

# The raw data:

{raw_data}

# The code:

{code}

Output:
"""

CHARACTERISTICS = (
    "the chart type, the values of specific data points, which series is highest or "
    "lowest, counts of categories, comparisons between series, and overall trends"
)


def _row_column_text(spec: ChartSpec) -> str:
    c = constraint_for(spec.chart_type)
    return (
        f"{spec.n_cols} columns (including the leading label column) and "
        f"{spec.n_rows} rows; {c.notes}"
    )


def data_prompt(spec: ChartSpec) -> str:
    trends = ", ".join(f"{t.family.value} ({t.id})" for t in spec.trends)
    return DATA_PROMPT.format(
        chart_type=spec.chart_type.value.replace("_", " "),
        theme=f"{spec.theme.phrase} ({spec.theme.topic})",
        trends=trends,
        row_column=_row_column_text(spec),
        data_constraints="All cells outside the first row and column must be numeric.",
    )


def code_prompt(spec: ChartSpec, table: DataTable, filename: str) -> str:
    return CODE_PROMPT.format(
        engine=spec.engine.value,
        filename=filename,
        chart_type=spec.chart_type.value.replace("_", " "),
        data=table.csv_text,
    )


def simple_qa_prompt(
    data_des: str, chart_des: str, table: DataTable, code: str, examples: str
) -> str:
    return SIMPLE_QA_PROMPT.format(
        characteristics=CHARACTERISTICS,
        instruction_examples=examples,
        data_des=data_des,
        chart_des=chart_des,
        raw_data=table.csv_text,
        code=code,
    )


def complex_qa_prompt(
    data_des: str, chart_des: str, table: DataTable, code: str, examples: str
) -> str:
    return COMPLEX_QA_PROMPT.format(
        characteristics=CHARACTERISTICS,
        cot_example=examples,
        data_des=data_des,
        chart_des=chart_des,
        raw_data=table.csv_text,
        code=code,
    )
